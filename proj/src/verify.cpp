#include "funnelkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "funnelkit/allocation.hpp"
#include "funnelkit/dp.hpp"
#include "funnelkit/frl.hpp"
#include "funnelkit/funnel.hpp"
#include "funnelkit/json_io.hpp"
#include "funnelkit/oracle.hpp"
#include "funnelkit/parallelize.hpp"

namespace funnelkit {

namespace {

using nlohmann::json;

constexpr std::size_t kFunnelComponents = 100;
constexpr std::size_t kAlphaGridPoints = 5;
constexpr std::size_t kFrlJoints = 200;
constexpr std::size_t kLogLossJoints = 100;
constexpr std::size_t kTransformInstances = 100;
constexpr std::size_t kLpInstances = 60;

constexpr double kInfVal = std::numeric_limits<double>::infinity();

}  // namespace

SuiteResult run_funnel_suite(std::uint64_t seed, std::size_t search_trials,
                             bool negative_control) {
  const std::vector<ComponentModel> comps = funnel_corpus(seed, kFunnelComponents);

  // A corruptible instance for the negative control: any component where the
  // raw release leaks strictly more than the optimum at alpha < H(X).
  std::size_t corrupt_comp = comps.size();
  if (negative_control) {
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (comps[i].entropy_s() > 0.01) {
        corrupt_comp = i;
        break;
      }
    }
  }

  struct Cell {
    double info_gap;     // I(X;Y) - alpha, must be >= -1e-9
    double leak_gap;     // |I(S;Y) - funnel_leakage|, must be <= 1e-9
    double search_margin;  // best_found - funnel_leakage, must be >= -1e-6
  };
  std::vector<Cell> cells(comps.size() * kAlphaGridPoints);

  const long long total = static_cast<long long>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (long long idx = 0; idx < total; ++idx) {
    const std::size_t i = static_cast<std::size_t>(idx) / kAlphaGridPoints;
    const std::size_t g = static_cast<std::size_t>(idx) % kAlphaGridPoints;
    const ComponentModel& comp = comps[i];
    const double h_x = comp.entropy_x();
    const double tau = threshold(comp);
    const double alpha = h_x * (static_cast<double>(g) / (kAlphaGridPoints - 1));
    const double target = funnel_leakage(alpha, tau);

    ComponentSolution sol = synthesize(comp, alpha);
    if (negative_control && i == corrupt_comp && g == 1)
      sol.channel = Channel::identity(comp.alphabet_x);
    const ComponentMetrics m = evaluate_component(comp, sol.channel);

    SearchConfig cfg;
    cfg.trials = search_trials;
    cfg.out_alphabet_size = comp.alphabet_x.size() + 1;
    cfg.seed = derive_seed(seed, 0x60000 + static_cast<std::uint64_t>(idx));
    const double best = search_min_leakage(comp, alpha, cfg);

    cells[idx] = Cell{m.info_x_bits - alpha, std::abs(m.leakage_s_bits - target),
                      best - target};
  }

  double min_info_gap = kInfVal, max_leak_gap = 0.0, min_search_margin = kInfVal;
  for (const Cell& c : cells) {
    min_info_gap = std::min(min_info_gap, c.info_gap);
    max_leak_gap = std::max(max_leak_gap, c.leak_gap);
    min_search_margin = std::min(min_search_margin, c.search_margin);
  }

  SuiteResult r;
  r.name = "funnel_closed_form";
  r.pass = min_info_gap >= -kProbTol && max_leak_gap <= kProbTol && min_search_margin >= -1e-6;
  r.details = {{"components", comps.size()},
               {"alpha_grid_points", kAlphaGridPoints},
               {"search_trials", search_trials},
               {"min_info_gap_bits", json_number(min_info_gap)},
               {"max_leakage_gap_bits", json_number(max_leak_gap)},
               {"min_search_margin_bits", json_number(min_search_margin)}};
  return r;
}

SuiteResult run_frl_suite(std::uint64_t seed) {
  const std::vector<JointTable> joints = frl_corpus(seed, kFrlJoints);

  struct Cell {
    double tv_independence;
    double h_x_given_wz;
    double reconstruction_gap;
    bool cardinality_ok;
  };
  std::vector<Cell> cells(joints.size());

  const long long total = static_cast<long long>(joints.size());
#pragma omp parallel for schedule(dynamic)
  for (long long idx = 0; idx < total; ++idx) {
    const JointTable& joint = joints[idx];
    const FrlRepresentation rep = functional_representation(joint);
    const Pmf pw = joint.col_marginal();
    const std::size_t nz = rep.z_pmf.size();

    // Materialize the coupling p(x, w, z) = p_W(w) z_pmf(z) 1[g(w,z)=x].
    const std::size_t nx = joint.rows(), nw = joint.cols();
    std::vector<double> tensor(nx * nw * nz, 0.0);
    for (std::size_t w = 0; w < nw; ++w)
      for (std::size_t z = 0; z < nz; ++z)
        tensor[(rep.assigned(w, z) * nw + w) * nz + z] = pw[w] * rep.z_pmf[z];

    // Z independence: TV between the (W, Z) marginal and p_W x p_Z.
    double tv = 0.0;
    for (std::size_t w = 0; w < nw; ++w) {
      for (std::size_t z = 0; z < nz; ++z) {
        double mass = 0.0;
        for (std::size_t x = 0; x < nx; ++x) mass += tensor[(x * nw + w) * nz + z];
        tv += std::abs(mass - pw[w] * rep.z_pmf[z]);
      }
    }
    tv *= 0.5;

    // H(X | W, Z) over the coupling.
    double h = 0.0;
    for (std::size_t w = 0; w < nw; ++w) {
      for (std::size_t z = 0; z < nz; ++z) {
        double mass = 0.0;
        for (std::size_t x = 0; x < nx; ++x) mass += tensor[(x * nw + w) * nz + z];
        if (mass <= 0.0) continue;
        for (std::size_t x = 0; x < nx; ++x) {
          const double p = tensor[(x * nw + w) * nz + z];
          if (p > 0.0) h -= p * std::log2(p / mass);
        }
      }
    }

    // Reconstruction of the input joint.
    double recon = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t w = 0; w < nw; ++w) {
        double mass = 0.0;
        for (std::size_t z = 0; z < nz; ++z) mass += tensor[(x * nw + w) * nz + z];
        recon = std::max(recon, std::abs(mass - joint.at(x, w)));
      }
    }

    // |Z| <= sum_w |support| - #supported w + 1.
    std::size_t bound = 1;
    std::size_t supported = 0;
    for (std::size_t w = 0; w < nw; ++w) {
      if (pw[w] <= 0.0) continue;
      ++supported;
      for (std::size_t x = 0; x < nx; ++x)
        if (joint.at(x, w) > 0.0) ++bound;
    }
    bound -= supported;

    cells[idx] = Cell{tv, h, recon, nz <= bound};
  }

  // Leakage-free specialization on the funnel corpus.
  double max_priv_gap = 0.0;
  const std::vector<ComponentModel> comps = funnel_corpus(derive_seed(seed, 0x70000), 50);
  for (const auto& comp : comps) {
    const Channel yf = leakage_free_privatizer(comp);
    const ComponentMetrics m = evaluate_component(comp, yf);
    const double tau = comp.entropy_x() - comp.entropy_s();
    max_priv_gap = std::max(max_priv_gap, std::abs(m.info_x_bits - tau));
    max_priv_gap = std::max(max_priv_gap, m.leakage_s_bits);
  }

  double max_tv = 0.0, max_h = 0.0, max_recon = 0.0;
  bool cardinality_ok = true;
  for (const Cell& c : cells) {
    max_tv = std::max(max_tv, c.tv_independence);
    max_h = std::max(max_h, c.h_x_given_wz);
    max_recon = std::max(max_recon, c.reconstruction_gap);
    cardinality_ok = cardinality_ok && c.cardinality_ok;
  }

  SuiteResult r;
  r.name = "functional_representation";
  r.pass = max_tv <= kProbTol && max_h <= kProbTol && max_recon <= kProbTol &&
           cardinality_ok && max_priv_gap <= kProbTol;
  r.details = {{"joints", joints.size()},
               {"max_tv_independence", json_number(max_tv)},
               {"max_h_x_given_wz_bits", json_number(max_h)},
               {"max_reconstruction_gap", json_number(max_recon)},
               {"cardinality_bound_ok", cardinality_ok},
               {"max_privatizer_gap_bits", json_number(max_priv_gap)}};
  return r;
}

SuiteResult run_lp_suite(std::uint64_t seed) {
  std::vector<DataModel> models = lp_corpus(seed, kLpInstances);
  models.push_back(parity_model());
  {
    DataModel zero = parity_model();  // all-zero targets
    for (auto& t : zero.tasks) t.gamma_bits = 0.0;
    models.push_back(zero);
    DataModel disjoint = parity_model();  // disjoint tasks
    disjoint.tasks[0].components = {0};
    disjoint.tasks[0].gamma_bits = 1.75;
    disjoint.tasks[1].components = {1};
    disjoint.tasks[1].gamma_bits = 0.5;
    models.push_back(disjoint);
    DataModel tight = parity_model();  // tau-tight targets
    tight.tasks[0].gamma_bits = 1.0;
    tight.tasks[1].gamma_bits = 2.0;
    models.push_back(tight);
    DataModel infeasible = parity_model();
    infeasible.tasks[0].gamma_bits = 2.5;  // > H(X_0) = 2
    models.push_back(infeasible);
  }

  std::size_t optimal_count = 0, infeasible_count = 0;
  double max_gap = 0.0;
  bool status_match = true;
  for (const auto& model : models) {
    const Allocation a = solve_allocation(model);
    const VertexEnumerationResult v = enumerate_lp_vertices(model);
    const bool simplex_ok = a.status == Allocation::Status::optimal;
    if (simplex_ok != v.feasible) {
      status_match = false;
      continue;
    }
    if (simplex_ok) {
      ++optimal_count;
      max_gap = std::max(max_gap, std::abs(a.total_leakage_bits - v.objective));
    } else {
      ++infeasible_count;
    }
  }

  SuiteResult r;
  r.name = "lp_equivalence";
  r.pass = status_match && max_gap <= kProbTol && infeasible_count > 0;
  r.details = {{"instances", models.size()},
               {"optimal_instances", optimal_count},
               {"infeasible_instances", infeasible_count},
               {"status_match", status_match},
               {"max_objective_gap_bits", json_number(max_gap)}};
  return r;
}

namespace {

SuiteResult transform_suite(std::uint64_t seed, bool compression) {
  const auto corpus = transform_corpus(seed, kTransformInstances);

  struct Cell {
    double key_gap;          // |leakage delta| or |rate delta|
    double min_utility_delta;
    double min_component_delta;
    bool product_form_ok;
  };
  std::vector<Cell> cells(corpus.size());

  const long long total = static_cast<long long>(corpus.size());
#pragma omp parallel for schedule(dynamic)
  for (long long idx = 0; idx < total; ++idx) {
    const auto& [model, ch] = corpus[idx];
    const ParallelizedMechanism mech =
        compression ? parallelize_compression(model, ch) : parallelize_privatization(model, ch);
    const auto& rep = mech.report;
    double min_u = kInfVal, min_c = kInfVal;
    for (double d : rep.utility_deltas) min_u = std::min(min_u, d);
    for (double d : rep.per_component_deltas) min_c = std::min(min_c, d);
    if (rep.utility_deltas.empty()) min_u = 0.0;
    cells[idx] = Cell{std::abs(compression ? rep.rate_delta : rep.leakage_delta), min_u, min_c,
                      rep.product_form_ok};
  }

  double max_key = 0.0, min_u = kInfVal, min_c = kInfVal;
  bool form_ok = true;
  for (const Cell& c : cells) {
    max_key = std::max(max_key, c.key_gap);
    min_u = std::min(min_u, c.min_utility_delta);
    min_c = std::min(min_c, c.min_component_delta);
    form_ok = form_ok && c.product_form_ok;
  }

  SuiteResult r;
  r.name = compression ? "compression_parallelization" : "privatization_parallelization";
  r.pass = max_key <= kProbTol && min_u >= -kProbTol && form_ok &&
           (!compression || min_c >= -kProbTol);
  r.details = {{"instances", corpus.size()},
               {compression ? "max_rate_gap_bits" : "max_leakage_gap_bits", json_number(max_key)},
               {"min_utility_delta_bits", json_number(min_u)},
               {"min_per_component_delta_bits", json_number(min_c)},
               {"product_form_ok", form_ok}};
  return r;
}

}  // namespace

SuiteResult run_privatization_suite(std::uint64_t seed) { return transform_suite(seed, false); }

SuiteResult run_compression_suite(std::uint64_t seed) { return transform_suite(seed, true); }

SuiteResult run_logloss_suite(std::uint64_t seed, std::size_t decoder_trials) {
  const std::vector<JointTable> joints = logloss_corpus(seed, kLogLossJoints);

  double max_posterior_gap = 0.0;
  double min_sweep_margin = kInfVal;
  const long long total = static_cast<long long>(joints.size());
#pragma omp parallel for schedule(dynamic)
  for (long long idx = 0; idx < total; ++idx) {
    const JointTable& joint = joints[idx];
    const double h = conditional_entropy(joint);
    const double loss = expected_log_loss(joint, optimal_soft_decoder(joint));
    const double sweep =
        sweep_decoders(joint, decoder_trials, derive_seed(seed, 0x80000 + idx));
#pragma omp critical
    {
      max_posterior_gap = std::max(max_posterior_gap, std::abs(loss - h));
      min_sweep_margin = std::min(min_sweep_margin, sweep - h);
    }
  }

  SuiteResult r;
  r.name = "logloss_equivalence";
  r.pass = max_posterior_gap <= kExactTol && min_sweep_margin >= -kProbTol;
  r.details = {{"joints", joints.size()},
               {"decoder_trials", decoder_trials},
               {"max_posterior_gap_bits", json_number(max_posterior_gap)},
               {"min_sweep_margin_bits", json_number(min_sweep_margin)}};
  return r;
}

SuiteResult run_dp_suite(std::uint64_t seed) {
  const auto corpus = transform_corpus(seed, kTransformInstances);
  std::vector<char> oks(corpus.size(), 0);
  std::vector<double> gaps(corpus.size(), 0.0);

  const long long total = static_cast<long long>(corpus.size());
#pragma omp parallel for schedule(dynamic)
  for (long long idx = 0; idx < total; ++idx) {
    const auto& [model, ch] = corpus[idx];
    const DpParallelizationResult res = verify_dp_parallelization(model, ch);
    oks[idx] = res.ok ? 1 : 0;
    if (std::isinf(res.eps_original_nats)) {
      gaps[idx] = 0.0;
    } else {
      gaps[idx] = res.eps_parallelized_nats - res.eps_original_nats;
    }
  }

  bool all_ok = true;
  double max_gap = -kInfVal;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    all_ok = all_ok && oks[i];
    max_gap = std::max(max_gap, gaps[i]);
  }

  // Randomized response on a uniform binary component with flip 0.25.
  ComponentModel comp;
  comp.alphabet_x = {"0", "1"};
  comp.pmf = {0.5, 0.5};
  comp.private_map = {0, 1};
  comp.alphabet_s = {"0", "1"};
  DataModel rr_model;
  rr_model.components = {comp};
  Channel rr;
  rr.in_alphabet = comp.alphabet_x;
  rr.out_alphabet = {"0", "1"};
  rr.rows = {0.75, 0.25, 0.25, 0.75};
  const double rr_eps = epsilon(rr_model, rr).epsilon_nats;
  const double rr_gap = std::abs(rr_eps - std::log(3.0));

  SuiteResult r;
  r.name = "dp_parallelization";
  r.pass = all_ok && rr_gap <= kProbTol;
  r.details = {{"instances", corpus.size()},
               {"all_non_increasing", all_ok},
               {"max_epsilon_increase_nats", json_number(max_gap)},
               {"randomized_response_gap_nats", json_number(rr_gap)}};
  return r;
}

SuiteResult run_worked_example_suite() {
  const DataModel model = parity_model();
  const MechanismBundle bundle = solve_and_synthesize(model);

  bool ok = bundle.allocation.status == Allocation::Status::optimal;
  double l_gap = kInfVal, alpha0_gap = kInfVal, alpha1_gap = kInfVal, eval_gap = kInfVal;
  if (ok) {
    l_gap = std::abs(bundle.allocation.total_leakage_bits - 0.5);
    alpha0_gap = std::abs(bundle.allocation.alphas[0] - 1.5);
    alpha1_gap = std::abs(bundle.allocation.alphas[1] - 1.0);
    const MechanismMetrics m = evaluate_mechanism(model, *bundle.product);
    eval_gap = std::abs(m.leakage_bits - bundle.allocation.total_leakage_bits);
    ok = l_gap <= kProbTol && alpha0_gap <= kProbTol && alpha1_gap <= kProbTol &&
         eval_gap <= kProbTol && bundle.product.has_value();
  }

  SuiteResult r;
  r.name = "worked_example";
  r.pass = ok;
  r.details = {{"l_star_gap_bits", json_number(l_gap)},
               {"alpha0_gap_bits", json_number(alpha0_gap)},
               {"alpha1_gap_bits", json_number(alpha1_gap)},
               {"eval_roundtrip_gap_bits", json_number(eval_gap)}};
  return r;
}

nlohmann::json run_all_suites(std::uint64_t seed, std::size_t search_trials,
                              bool negative_control) {
  const std::size_t decoder_trials = std::max<std::size_t>(1, search_trials / 10);
  std::vector<SuiteResult> suites;
  suites.push_back(run_funnel_suite(seed, search_trials, negative_control));
  suites.push_back(run_frl_suite(seed));
  suites.push_back(run_lp_suite(seed));
  suites.push_back(run_privatization_suite(seed));
  suites.push_back(run_compression_suite(seed));
  suites.push_back(run_logloss_suite(seed, decoder_trials));
  suites.push_back(run_dp_suite(seed));
  suites.push_back(run_worked_example_suite());

  json summary;
  summary["seed"] = seed;
  summary["search_trials"] = search_trials;
  summary["decoder_trials"] = decoder_trials;
  json arr = json::array();
  bool all_pass = true;
  for (const auto& s : suites) {
    json js;
    js["name"] = s.name;
    js["pass"] = s.pass;
    js["details"] = s.details;
    arr.push_back(std::move(js));
    all_pass = all_pass && s.pass;
  }
  summary["suites"] = std::move(arr);
  summary["all_pass"] = all_pass;
  return summary;
}

}  // namespace funnelkit
