#pragma once

#include <optional>
#include <string>

#include "funnelkit/channel.hpp"
#include "funnelkit/model.hpp"

namespace funnelkit {

// Differential privacy of a mechanism with respect to the private vector S
// under Hamming-1 neighboring: the smallest eps with
//   p_{Y|S}(y|s) <= p_{Y|S}(y|s') * e^(eps * d_H(s, s')).
// Reported in nats; +inf when a neighbor pair has one-sided support.
struct DpWitness {
  std::string y;
  std::string s;
  std::string s_neighbor;
};

struct DpReport {
  double epsilon_nats = 0.0;
  std::optional<DpWitness> witness;
};

DpReport epsilon(const DataModel& model, const Channel& ch);

// Same quantity for a single component (every s != s' pair is a neighbor).
DpReport epsilon_component(const ComponentModel& comp, const Channel& ch);

struct DpParallelizationResult {
  double eps_original_nats = 0.0;
  double eps_parallelized_nats = 0.0;
  bool ok = false;
};

// Runs the privatization transform and checks eps does not increase.
DpParallelizationResult verify_dp_parallelization(const DataModel& model, const Channel& ch);

}  // namespace funnelkit
