#pragma once

#include <optional>
#include <vector>

#include "funnelkit/channel.hpp"
#include "funnelkit/funnel.hpp"
#include "funnelkit/model.hpp"

namespace funnelkit {

// Solution of the released-information allocation LP.
struct Allocation {
  enum class Status { optimal, infeasible };
  Status status = Status::infeasible;
  std::vector<double> alphas;
  std::vector<double> taus;
  std::vector<double> leakage_per_component;
  double total_leakage_bits = 0.0;
  std::vector<std::size_t> violated_tasks;  // populated when infeasible
};

// Synthesized per-component mechanisms assembled into one release.
struct MechanismBundle {
  Allocation allocation;
  std::vector<ComponentSolution> solutions;
  // Absent when the product of per-component output alphabets exceeds the
  // desk-scale cap; metrics then come from the independence decomposition.
  std::optional<Channel> product;
  MechanismMetrics metrics;
};

// Minimizes total leakage sum_i max(0, alpha_i - tau_i) subject to the
// per-task coverage constraints and tau_i <= alpha_i <= H(X_i), breaking LP
// ties toward the lexicographically-least alpha.
Allocation solve_allocation(const DataModel& model);

// solve_allocation followed by per-component synthesis and verification that
// the assembled mechanism meets every constraint at the LP optimum.
MechanismBundle solve_and_synthesize(const DataModel& model);

}  // namespace funnelkit
