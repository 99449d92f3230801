#include "funnelkit/dp.hpp"

#include <cmath>
#include <limits>

#include "funnelkit/parallelize.hpp"

namespace funnelkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Max |ln p(y|s) - ln p(y|s')| over the given neighbor pairs of a (S, Y)
// conditional table; +inf on one-sided zeros, pairs with both sides zero are
// outside the support and skipped.
DpReport max_ratio(const JointTable& sy, const Pmf& ps,
                   const std::vector<std::pair<std::size_t, std::size_t>>& neighbors) {
  DpReport report;
  for (const auto& [a, b] : neighbors) {
    if (ps[a] <= 0.0 || ps[b] <= 0.0) continue;
    for (std::size_t y = 0; y < sy.cols(); ++y) {
      const double pa = sy.at(a, y) / ps[a];
      const double pb = sy.at(b, y) / ps[b];
      if (pa <= 0.0 && pb <= 0.0) continue;
      double eps;
      if (pa <= 0.0 || pb <= 0.0) {
        eps = kInf;
      } else {
        eps = std::abs(std::log(pa) - std::log(pb));
      }
      if (eps > report.epsilon_nats) {
        report.epsilon_nats = eps;
        report.witness = DpWitness{sy.col_alphabet[y], sy.row_alphabet[a], sy.row_alphabet[b]};
        if (eps == kInf) return report;
      }
    }
  }
  return report;
}

}  // namespace

DpReport epsilon(const DataModel& model, const Channel& ch) {
  const LabeledPmf px = joint_pmf(model, all_indices(model));
  if (ch.in_alphabet != px.alphabet)
    throw std::invalid_argument("dp: channel input does not match model alphabet");
  const JointTable xy = push_joint(px.probs, ch);
  const JointTable sy =
      relabel_through(private_projection(model), private_product_alphabet(model), xy);
  const Pmf ps = sy.row_marginal();

  // Hamming-1 neighbor pairs on the product private alphabet.
  std::vector<std::size_t> sizes;
  for (const auto& comp : model.components) sizes.push_back(comp.alphabet_s.size());
  std::vector<std::size_t> strides(sizes.size());
  std::size_t stride = 1;
  for (std::size_t k = sizes.size(); k-- > 0;) {
    strides[k] = stride;
    stride *= sizes[k];
  }
  std::vector<std::pair<std::size_t, std::size_t>> neighbors;
  for (std::size_t s = 0; s < sy.rows(); ++s) {
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      const std::size_t digit = (s / strides[k]) % sizes[k];
      for (std::size_t d = digit + 1; d < sizes[k]; ++d)
        neighbors.emplace_back(s, s + (d - digit) * strides[k]);
    }
  }
  return max_ratio(sy, ps, neighbors);
}

DpReport epsilon_component(const ComponentModel& comp, const Channel& ch) {
  if (ch.in_alphabet != comp.alphabet_x)
    throw std::invalid_argument("dp: channel input does not match component");
  const JointTable xy = push_joint(comp.pmf, ch);
  const JointTable sy = relabel_through(comp.private_map, comp.alphabet_s, xy);
  const Pmf ps = sy.row_marginal();
  std::vector<std::pair<std::size_t, std::size_t>> neighbors;
  for (std::size_t a = 0; a < ps.size(); ++a)
    for (std::size_t b = a + 1; b < ps.size(); ++b) neighbors.emplace_back(a, b);
  return max_ratio(sy, ps, neighbors);
}

DpParallelizationResult verify_dp_parallelization(const DataModel& model, const Channel& ch) {
  DpParallelizationResult result;
  result.eps_original_nats = epsilon(model, ch).epsilon_nats;

  // For a product of per-component channels, a Hamming-1 pair differs in one
  // coordinate and the other factors cancel, so eps is the max component eps.
  const ParallelizedMechanism mech = parallelize_privatization(model, ch);
  double eps = 0.0;
  for (std::size_t i = 0; i < mech.components.size(); ++i) {
    const double e = epsilon_component(model.components[i], mech.components[i]).epsilon_nats;
    if (e > eps) eps = e;
  }
  result.eps_parallelized_nats = eps;
  result.ok = result.eps_parallelized_nats <= result.eps_original_nats + kProbTol ||
              result.eps_original_nats == kInf;
  return result;
}

}  // namespace funnelkit
