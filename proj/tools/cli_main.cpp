#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "funnelkit/allocation.hpp"
#include "funnelkit/dp.hpp"
#include "funnelkit/errors.hpp"
#include "funnelkit/json_io.hpp"
#include "funnelkit/model.hpp"
#include "funnelkit/oracle.hpp"
#include "funnelkit/parallelize.hpp"
#include "funnelkit/verify.hpp"

namespace fk = funnelkit;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInfeasible = 3;

int cmd_analyze(const std::string& model_path) {
  const fk::LoadedModel loaded = fk::load_model_report(model_path);
  const fk::DataModel& model = loaded.model;

  json report;
  json comps = json::array();
  for (std::size_t i = 0; i < model.components.size(); ++i) {
    const auto& c = model.components[i];
    comps.push_back({{"index", i},
                     {"symbols", c.alphabet_x.size()},
                     {"H_x_bits", fk::json_number(c.entropy_x())},
                     {"H_s_bits", fk::json_number(c.entropy_s())},
                     {"tau_bits", fk::json_number(fk::threshold(c))}});
  }
  report["components"] = std::move(comps);

  json tasks = json::array();
  for (std::size_t k = 0; k < model.tasks.size(); ++k) {
    const auto& t = model.tasks[k];
    double sum_tau = 0.0, sum_h = 0.0;
    for (std::size_t i : t.components) {
      sum_tau += fk::threshold(model.components[i]);
      sum_h += model.components[i].entropy_x();
    }
    const bool ok = t.gamma_bits >= -fk::kProbTol && t.gamma_bits <= sum_h + fk::kProbTol;
    tasks.push_back({{"index", k},
                     {"components", t.components},
                     {"gamma_bits", fk::json_number(t.gamma_bits)},
                     {"H_c_bits", fk::json_number(sum_h)},
                     {"sum_tau_bits", fk::json_number(sum_tau)},
                     {"leakage_free", t.gamma_bits <= sum_tau + fk::kProbTol},
                     {"feasible", ok}});
  }
  report["tasks"] = std::move(tasks);
  report["feasible"] = loaded.violated_tasks.empty();
  if (!loaded.violated_tasks.empty()) report["violated_tasks"] = loaded.violated_tasks;

  std::cout << report.dump(2) << "\n";
  return loaded.violated_tasks.empty() ? kExitOk : kExitInfeasible;
}

int cmd_solve(const std::string& model_path, const std::string& emit_path) {
  const fk::DataModel model = fk::load_model(model_path);
  const fk::MechanismBundle bundle = fk::solve_and_synthesize(model);
  std::cout << fk::allocation_to_json(bundle.allocation).dump(2) << "\n";
  if (bundle.allocation.status != fk::Allocation::Status::optimal) return kExitInfeasible;
  if (!emit_path.empty()) {
    std::ofstream out(emit_path);
    if (!out) throw std::runtime_error("cannot write mechanism file: " + emit_path);
    out << fk::bundle_to_json(bundle).dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_eval(const std::string& model_path, const std::string& channel_path) {
  const fk::DataModel model = fk::load_model(model_path);
  const fk::Channel ch = fk::load_channel_file(channel_path);
  const fk::MechanismMetrics m = fk::evaluate_mechanism(model, ch);
  const fk::DpReport dp = fk::epsilon(model, ch);

  json out;
  out["metrics"] = fk::metrics_to_json(m);
  json tasks = json::array();
  for (std::size_t k = 0; k < model.tasks.size(); ++k) {
    tasks.push_back({{"index", k},
                     {"gamma_bits", fk::json_number(model.tasks[k].gamma_bits)},
                     {"utility_bits", fk::json_number(m.utility_bits[k])},
                     {"satisfied", m.utility_bits[k] >= model.tasks[k].gamma_bits - fk::kProbTol}});
  }
  out["tasks"] = std::move(tasks);
  out["dp"] = fk::dp_report_to_json(dp);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct SweepOptions {
  std::string model_path;
  std::string scales;
  std::string out_path;
  std::vector<std::string> gamma_overrides;
};

int cmd_sweep(const SweepOptions& opt) {
  const fk::DataModel base = fk::load_model(opt.model_path);

  double lo = 0.0, hi = 0.0, step = 0.0;
  if (std::sscanf(opt.scales.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0 ||
      lo < 0.0 || hi < lo)
    throw fk::ParseError("--scales expects a:b:step with 0 <= a <= b and step > 0");

  std::vector<std::pair<std::size_t, double>> overrides;
  for (const auto& s : opt.gamma_overrides) {
    std::size_t k = 0;
    double v = 0.0;
    if (std::sscanf(s.c_str(), "%zu=%lf", &k, &v) != 2 || k >= base.tasks.size())
      throw fk::ParseError("--gamma expects k=v with a valid task index");
    overrides.emplace_back(k, v);
  }

  std::vector<double> grid;
  for (double s = lo; s <= hi + 1e-12; s += step) grid.push_back(s);

  struct Row {
    double scale;
    bool feasible;
    double l_star;
    std::vector<double> slacks;
  };
  std::vector<Row> rows(grid.size());

  const long long n = static_cast<long long>(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long long g = 0; g < n; ++g) {
    fk::DataModel model = base;
    for (auto& task : model.tasks) task.gamma_bits *= grid[g];
    for (const auto& [k, v] : overrides) model.tasks[k].gamma_bits = v;
    const fk::Allocation a = fk::solve_allocation(model);
    Row row;
    row.scale = grid[g];
    row.feasible = a.status == fk::Allocation::Status::optimal;
    row.l_star = row.feasible ? a.total_leakage_bits : 0.0;
    if (row.feasible) {
      for (const auto& task : model.tasks) {
        double covered = 0.0;
        for (std::size_t i : task.components) covered += a.alphas[i];
        row.slacks.push_back(covered - task.gamma_bits);
      }
    }
    rows[g] = std::move(row);
  }

  std::ofstream out(opt.out_path);
  if (!out) throw std::runtime_error("cannot write sweep file: " + opt.out_path);
  out << "scale,L_star_bits,feasible";
  for (std::size_t k = 0; k < base.tasks.size(); ++k) out << ",slack_" << k;
  out << "\n";
  char buf[40];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  for (const Row& row : rows) {
    out << num(row.scale) << ",";
    out << (row.feasible ? num(row.l_star) : "") << ",";
    out << (row.feasible ? "true" : "false");
    for (std::size_t k = 0; k < base.tasks.size(); ++k)
      out << "," << (row.feasible ? num(row.slacks[k]) : "");
    out << "\n";
  }
  std::cerr << "wrote " << rows.size() << " rows to " << opt.out_path << "\n";
  return kExitOk;
}

int cmd_parallelize(const std::string& model_path, const std::string& channel_path,
                    bool compression) {
  const fk::DataModel model = fk::load_model(model_path);
  const fk::Channel ch = fk::load_channel_file(channel_path);
  const fk::ParallelizedMechanism mech = compression ? fk::parallelize_compression(model, ch)
                                                     : fk::parallelize_privatization(model, ch);
  json out = fk::parallelization_report_to_json(mech.report);
  out["transform"] = compression ? "compression" : "privatization";
  json sizes = json::array();
  for (const auto& c : mech.components) sizes.push_back(c.out_size());
  out["component_output_sizes"] = std::move(sizes);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_dp_eps(const std::string& model_path, const std::string& channel_path) {
  const fk::DataModel model = fk::load_model(model_path);
  const fk::Channel ch = fk::load_channel_file(channel_path);
  std::cout << fk::dp_report_to_json(fk::epsilon(model, ch)).dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(std::uint64_t seed, std::size_t trials, bool negative_control) {
  const auto start = std::chrono::steady_clock::now();
  const json summary = fk::run_all_suites(seed, trials, negative_control);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  std::cout << summary.dump(2) << "\n";
  std::cerr << "verify finished in " << elapsed.count() << " ms\n";
  return summary.at("all_pass").get<bool>() ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"funnelkit: optimal privacy-utility tradeoffs for component-wise discrete data"};
  app.require_subcommand(1);

  std::string model_path, channel_path, emit_path;
  SweepOptions sweep;
  bool compression = false;

  std::uint64_t seed = 42;
  if (const char* env = std::getenv("FUNNELKIT_SEED")) seed = std::strtoull(env, nullptr, 10);
  std::size_t trials = 10000;
  bool negative_control = false;

  auto* analyze = app.add_subcommand("analyze", "entropies, thresholds, feasibility diagnostics");
  analyze->add_option("model", model_path, "model spec JSON")->required();

  auto* solve = app.add_subcommand("solve", "solve the allocation LP and synthesize the mechanism");
  solve->add_option("model", model_path, "model spec JSON")->required();
  solve->add_option("--emit-mechanism", emit_path, "write the mechanism bundle JSON here");

  auto* eval = app.add_subcommand("eval", "evaluate a channel against a model");
  eval->add_option("model", model_path, "model spec JSON")->required();
  eval->add_option("channel", channel_path, "channel JSON (or solve bundle)")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "tradeoff curve over scaled utility targets");
  sweep_cmd->add_option("model", sweep.model_path, "model spec JSON")->required();
  sweep_cmd->add_option("--scales", sweep.scales, "a:b:step grid of gamma multipliers")->required();
  sweep_cmd->add_option("--out", sweep.out_path, "output CSV path")->required();
  sweep_cmd->add_option("--gamma", sweep.gamma_overrides,
                        "k=v fixes task k's gamma across the sweep (repeatable)");

  auto* par = app.add_subcommand("parallelize", "parallelization transform report");
  par->add_option("model", model_path, "model spec JSON")->required();
  par->add_option("channel", channel_path, "channel JSON")->required();
  par->add_flag("--compression", compression, "use the compression-style transform");

  auto* dp = app.add_subcommand("dp-eps", "differential-privacy epsilon of a mechanism");
  dp->add_option("model", model_path, "model spec JSON")->required();
  dp->add_option("channel", channel_path, "channel JSON")->required();

  auto* verify = app.add_subcommand("verify", "run all verification suites");
  verify->add_option("--seed", seed, "master seed (FUNNELKIT_SEED overrides the default)");
  verify->add_option("--trials", trials, "randomized-search trials per check");
  verify->add_flag("--negative-control", negative_control)->group("");  // testing hook

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(model_path);
    if (*solve) return cmd_solve(model_path, emit_path);
    if (*eval) return cmd_eval(model_path, channel_path);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*par) return cmd_parallelize(model_path, channel_path, compression);
    if (*dp) return cmd_dp_eps(model_path, channel_path);
    if (*verify) return cmd_verify(seed, trials, negative_control);
  } catch (const fk::InfeasibleModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
