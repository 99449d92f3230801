#pragma once

#include <optional>

#include "funnelkit/channel.hpp"
#include "funnelkit/model.hpp"

namespace funnelkit {

// Per-component outcome: released amount, threshold, leakage, and the
// synthesized channel achieving it (mix_p present only above threshold).
struct ComponentSolution {
  double alpha_bits = 0.0;
  double tau_bits = 0.0;
  double leakage_bits = 0.0;
  std::optional<double> mix_p;
  Channel channel;
};

// Leakage-free threshold tau = H(X) - H(S).
double threshold(const ComponentModel& comp);

// Minimum per-component leakage: 0 below threshold, alpha - tau above.
double funnel_leakage(double alpha_bits, double tau_bits);

// Builds the optimal mechanism for a released amount alpha: the leakage-free
// privatizer below threshold, otherwise its mixture with the raw release at
// p = (H(X) - alpha) / H(S). Throws when alpha exceeds H(X) beyond tolerance.
ComponentSolution synthesize(const ComponentModel& comp, double alpha_bits);

}  // namespace funnelkit
