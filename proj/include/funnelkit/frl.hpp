#pragma once

#include <cstddef>
#include <vector>

#include "funnelkit/channel.hpp"
#include "funnelkit/infotheory.hpp"
#include "funnelkit/model.hpp"

namespace funnelkit {

// Witness for the representation X = g(W, Z) with Z independent of W, built
// by stacking the conditionals p_{X|W=w} over [0,1) and cutting at the union
// of their cumulative breakpoints.
struct FrlRepresentation {
  Alphabet x_alphabet;
  Alphabet w_alphabet;
  Alphabet z_alphabet;              // "z0", "z1", ...
  Pmf z_pmf;                        // interval lengths
  std::vector<double> breakpoints;  // size |Z|+1, 0 = first, 1 = last
  std::vector<std::size_t> assign;  // (w * |Z| + z) -> x index, the function g

  std::size_t assigned(std::size_t w, std::size_t z) const { return assign[w * z_pmf.size() + z]; }
};

// Quantile construction over a joint with rows = X, cols = W. Guarantees
// Z independent of W and H(X|W,Z) = 0; breakpoints closer than 1e-12 merge.
FrlRepresentation functional_representation(const JointTable& joint);

// Specialization with W = S_i: the channel X -> Z releases everything about
// X that S determines nothing of, so I(S;Z) = 0 and I(X;Z) = H(X) - H(S).
Channel leakage_free_privatizer(const ComponentModel& comp);

}  // namespace funnelkit
