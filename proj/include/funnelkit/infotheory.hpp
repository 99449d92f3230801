#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace funnelkit {

using Pmf = std::vector<double>;
using Alphabet = std::vector<std::string>;

// Validation tolerance for probability sums.
inline constexpr double kProbTol = 1e-9;
// Tolerance for quantities that are exact up to rounding noise.
inline constexpr double kExactTol = 1e-12;

// Finite joint law over a labeled pair of alphabets, row-major.
struct JointTable {
  Alphabet row_alphabet;
  Alphabet col_alphabet;
  std::vector<double> probs;  // rows() * cols(), row-major

  std::size_t rows() const { return row_alphabet.size(); }
  std::size_t cols() const { return col_alphabet.size(); }
  double at(std::size_t r, std::size_t c) const { return probs[r * cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return probs[r * cols() + c]; }

  Pmf row_marginal() const;
  Pmf col_marginal() const;
  JointTable transposed() const;

  // Entries >= 0, total = 1 within kProbTol; throws std::invalid_argument.
  void validate() const;
};

// Soft (pmf-valued) estimator: one pmf over the task alphabet per output symbol.
struct SoftDecoder {
  Alphabet out_alphabet;   // indexes the rows of `table`
  Alphabet task_alphabet;  // alphabet each row is a pmf over
  std::vector<double> table;  // out * task, row-major

  double at(std::size_t y, std::size_t c) const { return table[y * task_alphabet.size() + c]; }
};

void validate_pmf(const Pmf& pmf);

// All measures are in bits (log base 2); 0·log 0 = 0 handled explicitly.
double entropy(const Pmf& pmf);
double mutual_information(const JointTable& joint);
// H(row | col).
double conditional_entropy(const JointTable& joint);
// +inf when q(x) = 0 < p(x); throws on size mismatch.
double kl_divergence(const Pmf& p, const Pmf& q);

// E[log2 1/decoder_Y(C)] for a joint over (C, Y); +inf is a value, not an error.
double expected_log_loss(const JointTable& joint, const SoftDecoder& decoder);
// Posterior decoder: rows are p_{C|Y=y}; prior p_C at zero-probability y.
SoftDecoder optimal_soft_decoder(const JointTable& joint);

}  // namespace funnelkit
