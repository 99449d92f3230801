#include "funnelkit/funnel.hpp"

#include <algorithm>
#include <stdexcept>

#include "funnelkit/frl.hpp"

namespace funnelkit {

double threshold(const ComponentModel& comp) {
  const double tau = comp.entropy_x() - comp.entropy_s();
  return tau > 0.0 ? tau : 0.0;  // deterministic f keeps H(S) <= H(X)
}

double funnel_leakage(double alpha_bits, double tau_bits) {
  if (alpha_bits < 0.0 || tau_bits < 0.0)
    throw std::invalid_argument("funnel_leakage: negative argument");
  return alpha_bits <= tau_bits ? 0.0 : alpha_bits - tau_bits;
}

ComponentSolution synthesize(const ComponentModel& comp, double alpha_bits) {
  const double h_x = comp.entropy_x();
  const double h_s = comp.entropy_s();
  const double tau = threshold(comp);
  if (alpha_bits > h_x + kProbTol)
    throw std::invalid_argument("synthesize: alpha exceeds H(X), unachievable");
  if (alpha_bits < 0.0) throw std::invalid_argument("synthesize: negative alpha");

  ComponentSolution sol;
  sol.alpha_bits = alpha_bits;
  sol.tau_bits = tau;

  const double alpha = std::min(alpha_bits, h_x);
  if (alpha <= tau) {
    // Below the threshold the leakage-free privatizer already releases tau.
    sol.channel = leakage_free_privatizer(comp);
    sol.leakage_bits = 0.0;
    return sol;
  }

  // alpha > tau forces H(S) > 0; release Y^f w.p. p and the raw symbol else.
  double p = (h_x - alpha) / h_s;
  p = std::clamp(p, 0.0, 1.0);
  sol.mix_p = p;
  sol.channel = mixture_channel(leakage_free_privatizer(comp), Channel::identity(comp.alphabet_x),
                                p, "f", "x");
  sol.leakage_bits = alpha - tau;
  return sol;
}

}  // namespace funnelkit
