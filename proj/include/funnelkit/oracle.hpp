#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "funnelkit/infotheory.hpp"
#include "funnelkit/model.hpp"

namespace funnelkit {

// Randomized-search configuration. Trials draw channel rows from a symmetric
// Dirichlet; known-good witnesses (constant, identity, the synthesized
// mechanism) are always evaluated so converse checks are never vacuous.
struct SearchConfig {
  std::size_t trials = 10000;
  std::size_t out_alphabet_size = 5;
  std::uint64_t seed = 42;
  double dirichlet_alpha = 1.0;
};

// Minimum I(S;Y) found over sampled channels with I(X;Y) >= alpha - 1e-6;
// +inf when nothing feasible. The OpenMP driver and the serial reference
// share per-trial seeding, so they return bit-identical results.
double search_min_leakage(const ComponentModel& comp, double alpha_bits, const SearchConfig& cfg);
double search_min_leakage_serial(const ComponentModel& comp, double alpha_bits,
                                 const SearchConfig& cfg);

// Minimum expected log loss over random soft decoders for a (C, Y) joint;
// the posterior decoder is evaluated first.
double sweep_decoders(const JointTable& joint, std::size_t trials, std::uint64_t seed);
double sweep_decoders_serial(const JointTable& joint, std::size_t trials, std::uint64_t seed);

// Independent allocation-LP check: enumerate all basic solutions of the
// inequality system (N <= 5, K <= 4) and take the best feasible vertex.
struct VertexEnumerationResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> alphas;
};
VertexEnumerationResult enumerate_lp_vertices(const DataModel& model);

}  // namespace funnelkit
