#include "funnelkit/allocation.hpp"

#include <cmath>
#include <stdexcept>

#include "funnelkit/simplex.hpp"

namespace funnelkit {

namespace {

constexpr double kCapSlack = 1e-11;

// LP in beta space (beta_i = alpha_i - tau_i >= 0):
//   min sum beta  s.t.  sum_{i in C_k} beta_i >= gamma_k - sum tau_i,
//                       beta_i <= H(S_i).
lp::Problem base_problem(const DataModel& model, const std::vector<double>& taus,
                         const std::vector<double>& upper) {
  const std::size_t n = model.components.size();
  lp::Problem p;
  p.objective.assign(n, 1.0);
  for (const auto& task : model.tasks) {
    std::vector<double> row(n, 0.0);
    double rhs = -0.0;
    double need = task.gamma_bits;
    for (std::size_t i : task.components) {
      row[i] = -1.0;  // -sum beta <= -(gamma - sum tau)
      need -= taus[i];
    }
    rhs = -need;
    p.ub_rows.push_back(std::move(row));
    p.ub_rhs.push_back(rhs);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = 1.0;
    p.ub_rows.push_back(std::move(row));
    p.ub_rhs.push_back(upper[i]);
  }
  return p;
}

}  // namespace

Allocation solve_allocation(const DataModel& model) {
  const std::size_t n = model.components.size();
  Allocation out;
  out.taus.resize(n);
  std::vector<double> upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.taus[i] = threshold(model.components[i]);
    upper[i] = model.components[i].entropy_s();  // H(X) - tau
  }

  // alpha = H pointwise satisfies every constraint iff no task overshoots.
  for (std::size_t k = 0; k < model.tasks.size(); ++k) {
    double h_sum = 0.0;
    for (std::size_t i : model.tasks[k].components)
      h_sum += model.components[i].entropy_x();
    if (model.tasks[k].gamma_bits > h_sum + kProbTol) out.violated_tasks.push_back(k);
  }
  if (!out.violated_tasks.empty()) {
    out.status = Allocation::Status::infeasible;
    return out;
  }

  lp::Problem base = base_problem(model, out.taus, upper);
  lp::Result first = lp::solve(base);
  if (first.status != lp::Status::optimal) {
    // The direct check above should have caught it; report all tasks unknown.
    out.status = Allocation::Status::infeasible;
    return out;
  }

  // Lexicographic tie-break: cap the objective at the optimum, then minimize
  // each coordinate in component order, capping it before moving on.
  lp::Problem pinned = base;
  {
    std::vector<double> row(n, 1.0);
    pinned.ub_rows.push_back(std::move(row));
    pinned.ub_rhs.push_back(first.objective + kCapSlack);
  }
  std::vector<double> beta(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    lp::Problem pass = pinned;
    pass.objective.assign(n, 0.0);
    pass.objective[j] = 1.0;
    for (std::size_t m = 0; m < j; ++m) {
      std::vector<double> row(n, 0.0);
      row[m] = 1.0;
      pass.ub_rows.push_back(std::move(row));
      pass.ub_rhs.push_back(beta[m] + kCapSlack);
    }
    lp::Result r = lp::solve(pass);
    if (r.status != lp::Status::optimal)
      throw std::logic_error("allocation: tie-break pass lost feasibility");
    beta[j] = r.x[j] > 0.0 ? r.x[j] : 0.0;
  }

  out.status = Allocation::Status::optimal;
  out.alphas.resize(n);
  out.leakage_per_component.resize(n);
  out.total_leakage_bits = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.alphas[i] = out.taus[i] + beta[i];
    out.leakage_per_component[i] = funnel_leakage(out.alphas[i], out.taus[i]);
    out.total_leakage_bits += out.leakage_per_component[i];
  }
  return out;
}

MechanismBundle solve_and_synthesize(const DataModel& model) {
  MechanismBundle bundle;
  bundle.allocation = solve_allocation(model);
  if (bundle.allocation.status != Allocation::Status::optimal) return bundle;

  std::vector<Channel> channels;
  for (std::size_t i = 0; i < model.components.size(); ++i) {
    bundle.solutions.push_back(synthesize(model.components[i], bundle.allocation.alphas[i]));
    channels.push_back(bundle.solutions.back().channel);
  }

  std::size_t out_product = 1;
  bool fits = true;
  for (const auto& ch : channels) {
    out_product *= ch.out_size();
    if (out_product > kProductCap) {
      fits = false;
      break;
    }
  }

  if (fits) {
    bundle.product = product_channel(channels);
    bundle.metrics = evaluate_mechanism(model, *bundle.product);
  } else {
    // Independence decomposition: every joint measure splits per component.
    MechanismMetrics m;
    std::vector<ComponentMetrics> per(model.components.size());
    for (std::size_t i = 0; i < model.components.size(); ++i) {
      per[i] = evaluate_component(model.components[i], channels[i]);
      m.leakage_bits += per[i].leakage_s_bits;
      m.rate_bits += per[i].info_x_bits;
      m.per_component_bits.push_back(per[i].info_x_bits);
    }
    for (const auto& task : model.tasks) {
      double u = 0.0;
      for (std::size_t i : task.components) u += per[i].info_x_bits;
      m.utility_bits.push_back(u);
    }
    bundle.metrics = std::move(m);
  }

  if (std::abs(bundle.metrics.leakage_bits - bundle.allocation.total_leakage_bits) > kProbTol)
    throw std::logic_error("solve_and_synthesize: achieved leakage misses the LP optimum");
  for (std::size_t k = 0; k < model.tasks.size(); ++k) {
    if (bundle.metrics.utility_bits[k] < model.tasks[k].gamma_bits - kProbTol)
      throw std::logic_error("solve_and_synthesize: utility constraint violated");
  }
  return bundle;
}

}  // namespace funnelkit
