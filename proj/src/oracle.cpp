#include "funnelkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "funnelkit/channel.hpp"
#include "funnelkit/frl.hpp"
#include "funnelkit/funnel.hpp"
#include "funnelkit/rng.hpp"

namespace funnelkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasSlack = 1e-6;

double entropy_raw(const double* p, std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (p[i] > 0.0) h -= p[i] * std::log2(p[i]);
  return h;
}

// Flattened component view for the hot trial loop.
struct CompView {
  std::vector<double> px;
  std::vector<std::size_t> s_of;
  std::size_t ns = 0;
  double h_x = 0.0;
};

CompView make_view(const ComponentModel& comp) {
  CompView v;
  v.px = comp.pmf;
  v.s_of = comp.private_map;
  v.ns = comp.alphabet_s.size();
  v.h_x = entropy_raw(v.px.data(), v.px.size());
  return v;
}

// I(X;Y) and I(S;Y) of a row-stochastic table against the component law.
// Leakage is skipped (left at -1) when the information test already fails.
struct TrialEval {
  double info_x;
  double leak_s;
};

TrialEval eval_rows(const CompView& v, const std::vector<double>& rows, std::size_t ny,
                    double alpha) {
  const std::size_t nx = v.px.size();
  std::vector<double> py(ny, 0.0);
  double h_joint = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const double p = v.px[x];
    if (p <= 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = p * rows[x * ny + y];
      py[y] += w;
      if (w > 0.0) h_joint -= w * std::log2(w);
    }
  }
  const double h_y = entropy_raw(py.data(), ny);
  TrialEval e{v.h_x + h_y - h_joint, -1.0};
  if (e.info_x < alpha - kFeasSlack) return e;

  std::vector<double> sy(v.ns * ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    const double p = v.px[x];
    if (p <= 0.0) continue;
    const std::size_t s = v.s_of[x];
    for (std::size_t y = 0; y < ny; ++y) sy[s * ny + y] += p * rows[x * ny + y];
  }
  std::vector<double> ps(v.ns, 0.0);
  for (std::size_t s = 0; s < v.ns; ++s)
    for (std::size_t y = 0; y < ny; ++y) ps[s] += sy[s * ny + y];
  const double leak =
      entropy_raw(ps.data(), v.ns) + h_y - entropy_raw(sy.data(), sy.size());
  e.leak_s = leak > 0.0 ? leak : 0.0;
  return e;
}

double witness_best(const ComponentModel& comp, double alpha) {
  double best = kInf;
  std::vector<Channel> witnesses;
  witnesses.push_back(Channel::constant(comp.alphabet_x));
  witnesses.push_back(Channel::identity(comp.alphabet_x));
  const double h_x = comp.entropy_x();
  if (alpha <= h_x + kProbTol) witnesses.push_back(synthesize(comp, std::min(alpha, h_x)).channel);
  for (const auto& ch : witnesses) {
    const ComponentMetrics m = evaluate_component(comp, ch);
    if (m.info_x_bits >= alpha - kFeasSlack) best = std::min(best, m.leakage_s_bits);
  }
  return best;
}

double trial_leakage(const CompView& v, double alpha, const SearchConfig& cfg,
                     std::size_t trial) {
  SplitMix64 rng(derive_seed(cfg.seed, trial));
  const std::size_t nx = v.px.size();
  const std::size_t ny = cfg.out_alphabet_size;
  std::vector<double> rows(nx * ny);
  for (std::size_t x = 0; x < nx; ++x) {
    double total = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      const double g =
          cfg.dirichlet_alpha == 1.0 ? rng.exponential() : rng.gamma(cfg.dirichlet_alpha);
      rows[x * ny + y] = g;
      total += g;
    }
    for (std::size_t y = 0; y < ny; ++y) rows[x * ny + y] /= total;
  }
  const TrialEval e = eval_rows(v, rows, ny, alpha);
  return e.leak_s >= 0.0 ? e.leak_s : kInf;
}

}  // namespace

double search_min_leakage(const ComponentModel& comp, double alpha_bits,
                          const SearchConfig& cfg) {
  if (cfg.trials < 1 || cfg.out_alphabet_size < 1)
    throw std::invalid_argument("search: trials and out_alphabet_size must be >= 1");
  const CompView v = make_view(comp);
  double best = witness_best(comp, alpha_bits);
  const long long trials = static_cast<long long>(cfg.trials);
#pragma omp parallel for reduction(min : best) schedule(static)
  for (long long t = 0; t < trials; ++t)
    best = std::min(best, trial_leakage(v, alpha_bits, cfg, static_cast<std::size_t>(t)));
  return best;
}

double search_min_leakage_serial(const ComponentModel& comp, double alpha_bits,
                                 const SearchConfig& cfg) {
  if (cfg.trials < 1 || cfg.out_alphabet_size < 1)
    throw std::invalid_argument("search: trials and out_alphabet_size must be >= 1");
  const CompView v = make_view(comp);
  double best = witness_best(comp, alpha_bits);
  for (std::size_t t = 0; t < cfg.trials; ++t)
    best = std::min(best, trial_leakage(v, alpha_bits, cfg, t));
  return best;
}

namespace {

double decoder_trial_loss(const JointTable& joint, std::uint64_t seed, std::size_t trial) {
  SplitMix64 rng(derive_seed(seed, trial));
  const std::size_t nc = joint.rows();
  const std::size_t ny = joint.cols();
  double loss = 0.0;
  std::vector<double> dec(nc);
  for (std::size_t y = 0; y < ny; ++y) {
    double total = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      dec[c] = rng.exponential();
      total += dec[c];
    }
    for (std::size_t c = 0; c < nc; ++c) {
      const double w = joint.at(c, y);
      if (w <= 0.0) continue;
      loss -= w * std::log2(dec[c] / total);
    }
  }
  return loss;
}

}  // namespace

double sweep_decoders(const JointTable& joint, std::size_t trials, std::uint64_t seed) {
  joint.validate();
  double best = expected_log_loss(joint, optimal_soft_decoder(joint));
  const long long n = static_cast<long long>(trials);
#pragma omp parallel for reduction(min : best) schedule(static)
  for (long long t = 0; t < n; ++t)
    best = std::min(best, decoder_trial_loss(joint, seed, static_cast<std::size_t>(t)));
  return best;
}

double sweep_decoders_serial(const JointTable& joint, std::size_t trials, std::uint64_t seed) {
  joint.validate();
  double best = expected_log_loss(joint, optimal_soft_decoder(joint));
  for (std::size_t t = 0; t < trials; ++t)
    best = std::min(best, decoder_trial_loss(joint, seed, t));
  return best;
}

namespace {

// Gaussian elimination with partial pivoting; false when near-singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-10) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

}  // namespace

VertexEnumerationResult enumerate_lp_vertices(const DataModel& model) {
  const std::size_t n = model.components.size();
  if (n > 5 || model.tasks.size() > 4)
    throw std::invalid_argument("enumerate_lp_vertices: dimension cap exceeded (N <= 5, K <= 4)");

  std::vector<double> taus(n), uppers(n);
  for (std::size_t i = 0; i < n; ++i) {
    taus[i] = threshold(model.components[i]);
    uppers[i] = model.components[i].entropy_x();
  }

  // All constraints as a >= rows: a·alpha >= b.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> lo(n, 0.0), hi(n, 0.0);
    lo[i] = 1.0;
    hi[i] = -1.0;
    rows.push_back(lo);
    rhs.push_back(taus[i]);
    rows.push_back(hi);
    rhs.push_back(-uppers[i]);
  }
  for (const auto& task : model.tasks) {
    std::vector<double> row(n, 0.0);
    for (std::size_t i : task.components) row[i] = 1.0;
    rows.push_back(row);
    rhs.push_back(task.gamma_bits);
  }

  VertexEnumerationResult result;
  const std::size_t m = rows.size();

  // Enumerate all size-n subsets of active constraints.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (;;) {
    std::vector<std::vector<double>> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rows[idx[i]];
      b[i] = rhs[idx[i]];
    }
    std::vector<double> alpha;
    if (solve_square(std::move(a), std::move(b), alpha)) {
      bool feasible = true;
      for (std::size_t r = 0; r < m && feasible; ++r) {
        double lhs = 0.0;
        for (std::size_t c = 0; c < n; ++c) lhs += rows[r][c] * alpha[c];
        if (lhs < rhs[r] - kProbTol) feasible = false;
      }
      if (feasible) {
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) objective += alpha[i] - taus[i];
        if (!result.feasible || objective < result.objective) {
          result.feasible = true;
          result.objective = objective;
          result.alphas = alpha;
        }
      }
    }
    // Next combination.
    std::size_t pos = n;
    bool exhausted = true;
    while (pos > 0) {
      --pos;
      if (idx[pos] != pos + m - n) {
        exhausted = false;
        break;
      }
    }
    if (exhausted) return result;
    ++idx[pos];
    for (std::size_t j = pos + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace funnelkit
