#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "funnelkit/infotheory.hpp"
#include "funnelkit/model.hpp"

namespace funnelkit {

// Finite conditional distribution p_{Out|In}, one pmf row per input symbol.
struct Channel {
  Alphabet in_alphabet;
  Alphabet out_alphabet;
  std::vector<double> rows;  // in * out, row-major

  std::size_t in_size() const { return in_alphabet.size(); }
  std::size_t out_size() const { return out_alphabet.size(); }
  double at(std::size_t x, std::size_t y) const { return rows[x * out_size() + y]; }
  double& at(std::size_t x, std::size_t y) { return rows[x * out_size() + y]; }

  void validate() const;  // rows sum to 1 within kProbTol, entries in [0, 1]

  static Channel identity(const Alphabet& alphabet);
  static Channel constant(const Alphabet& in, const std::string& out_label = "const");
};

struct MechanismMetrics {
  double leakage_bits = 0.0;                 // I(S;Y)
  std::vector<double> utility_bits;          // I(C_k;Y) per task
  double rate_bits = 0.0;                    // I(X;Y)
  std::vector<double> per_component_bits;    // I(X_i;Y) per component
};

// p_{X,Y} = p_X · p_{Y|X}.
JointTable push_joint(const Pmf& input, const Channel& ch);

// Applies a channel to the column variable of a joint (data-processing helper).
JointTable push_column(const JointTable& joint, const Channel& ch);

// Aggregates rows with the same image under a deterministic map, producing the
// joint over (feature, Y) from the joint over (X, Y).
JointTable relabel_through(const std::vector<std::size_t>& map, const Alphabet& feature_alphabet,
                           const JointTable& joint);

// Lexicographic product; single-channel lists pass through unchanged.
// Product alphabets are capped at kProductCap symbols.
Channel product_channel(const std::vector<Channel>& channels);

// Y' = A with probability p, B with probability 1-p; outputs carry the branch
// tag so the time-sharing arithmetic is exact.
Channel mixture_channel(const Channel& a, const Channel& b, double p,
                        const std::string& tag_a = "a", const std::string& tag_b = "b");

// Leakage/utility/rate of a mechanism over the model's full product alphabet.
MechanismMetrics evaluate_mechanism(const DataModel& model, const Channel& ch);

// Same measures for a single-component channel.
struct ComponentMetrics {
  double info_x_bits = 0.0;   // I(X_i;Y)
  double leakage_s_bits = 0.0;  // I(S_i;Y)
};
ComponentMetrics evaluate_component(const ComponentModel& comp, const Channel& ch);

}  // namespace funnelkit
