#include "funnelkit/frl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace funnelkit {

namespace {

constexpr double kMergeTol = 1e-12;

// Cumulative bands of p_{X|W=w}, stacked in alphabet order: band x covers
// [cum[x], cum[x+1]).
std::vector<double> cumulative_bands(const std::vector<double>& conditional) {
  std::vector<double> cum(conditional.size() + 1, 0.0);
  for (std::size_t x = 0; x < conditional.size(); ++x) cum[x + 1] = cum[x] + conditional[x];
  cum.back() = 1.0;  // guard against rounding drift at the top
  return cum;
}

std::size_t band_of(const std::vector<double>& cum, double point) {
  // First band whose upper edge exceeds `point`; zero-width bands are skipped
  // because their edges coincide.
  for (std::size_t x = 0; x + 1 < cum.size(); ++x) {
    if (point < cum[x + 1] && cum[x + 1] - cum[x] > 0.0) return x;
  }
  // point == 1 up to rounding: last band with positive width.
  for (std::size_t x = cum.size() - 1; x-- > 0;) {
    if (cum[x + 1] - cum[x] > 0.0) return x;
  }
  return 0;
}

}  // namespace

FrlRepresentation functional_representation(const JointTable& joint) {
  joint.validate();
  const std::size_t nx = joint.rows();
  const std::size_t nw = joint.cols();
  const Pmf pw = joint.col_marginal();
  const Pmf px = joint.row_marginal();

  // Conditionals p_{X|W=w}; zero-probability w falls back to the marginal so
  // its assign row is still defined (never exercised probabilistically).
  std::vector<std::vector<double>> cond(nw, std::vector<double>(nx));
  for (std::size_t w = 0; w < nw; ++w) {
    if (pw[w] > 0.0) {
      for (std::size_t x = 0; x < nx; ++x) cond[w][x] = joint.at(x, w) / pw[w];
    } else {
      cond[w] = px;
    }
  }

  // Union of cumulative breakpoints over supported w, merged within kMergeTol.
  std::vector<double> points{0.0, 1.0};
  for (std::size_t w = 0; w < nw; ++w) {
    if (pw[w] <= 0.0) continue;
    double cum = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      cum += cond[w][x];
      if (cum > 0.0 && cum < 1.0) points.push_back(cum);
    }
  }
  std::sort(points.begin(), points.end());
  std::vector<double> breakpoints;
  for (double p : points) {
    if (breakpoints.empty() || p - breakpoints.back() >= kMergeTol) breakpoints.push_back(p);
  }
  if (breakpoints.back() < 1.0) breakpoints.back() = 1.0;

  FrlRepresentation rep;
  rep.x_alphabet = joint.row_alphabet;
  rep.w_alphabet = joint.col_alphabet;
  rep.breakpoints = breakpoints;
  const std::size_t nz = breakpoints.size() - 1;
  rep.z_alphabet.resize(nz);
  rep.z_pmf.resize(nz);
  for (std::size_t z = 0; z < nz; ++z) {
    rep.z_alphabet[z] = "z" + std::to_string(z);
    rep.z_pmf[z] = breakpoints[z + 1] - breakpoints[z];
  }
  rep.assign.resize(nw * nz);
  for (std::size_t w = 0; w < nw; ++w) {
    const std::vector<double> cum = cumulative_bands(cond[w]);
    for (std::size_t z = 0; z < nz; ++z) {
      const double mid = 0.5 * (breakpoints[z] + breakpoints[z + 1]);
      rep.assign[w * nz + z] = band_of(cum, mid);
    }
  }
  return rep;
}

Channel leakage_free_privatizer(const ComponentModel& comp) {
  comp.validate();
  // Joint over (X, S); S is determined by X.
  JointTable joint;
  joint.row_alphabet = comp.alphabet_x;
  joint.col_alphabet = comp.alphabet_s;
  joint.probs.assign(comp.alphabet_x.size() * comp.alphabet_s.size(), 0.0);
  for (std::size_t x = 0; x < comp.pmf.size(); ++x) joint.at(x, comp.private_map[x]) = comp.pmf[x];

  const FrlRepresentation rep = functional_representation(joint);
  const Pmf ps = comp.s_pmf();
  const std::size_t nz = rep.z_pmf.size();

  Channel ch;
  ch.in_alphabet = comp.alphabet_x;
  ch.out_alphabet = rep.z_alphabet;
  ch.rows.assign(comp.alphabet_x.size() * nz, 0.0);
  for (std::size_t x = 0; x < comp.pmf.size(); ++x) {
    const std::size_t s = comp.private_map[x];
    const double p_x_given_s = ps[s] > 0.0 ? comp.pmf[x] / ps[s] : 0.0;
    if (p_x_given_s <= 0.0) {
      // Zero-probability symbol: any valid row works; point mass keeps it a pmf.
      ch.at(x, 0) = 1.0;
      continue;
    }
    double total = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      if (rep.assigned(s, z) == x) {
        ch.at(x, z) = rep.z_pmf[z] / p_x_given_s;
        total += ch.at(x, z);
      }
    }
    // Reconstruction makes each row sum to 1 up to merge rounding; tidy it.
    if (std::abs(total - 1.0) > kExactTol && total > 0.0) {
      for (std::size_t z = 0; z < nz; ++z) ch.at(x, z) /= total;
    }
  }
  return ch;
}

}  // namespace funnelkit
