#include "funnelkit/infotheory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace funnelkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -sum p log2 p over raw entries, no validation. Skips p <= 0 (0·log 0 = 0).
double entropy_raw(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

}  // namespace

Pmf JointTable::row_marginal() const {
  Pmf m(rows(), 0.0);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) m[r] += at(r, c);
  return m;
}

Pmf JointTable::col_marginal() const {
  Pmf m(cols(), 0.0);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) m[c] += at(r, c);
  return m;
}

JointTable JointTable::transposed() const {
  JointTable t;
  t.row_alphabet = col_alphabet;
  t.col_alphabet = row_alphabet;
  t.probs.resize(probs.size());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) t.probs[c * rows() + r] = at(r, c);
  return t;
}

void JointTable::validate() const {
  if (probs.size() != rows() * cols())
    throw std::invalid_argument("JointTable: probs size does not match alphabets");
  double total = 0.0;
  for (double v : probs) {
    if (!(v >= 0.0)) throw std::invalid_argument("JointTable: negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbTol)
    throw std::invalid_argument("JointTable: total mass " + std::to_string(total) + " != 1");
}

void validate_pmf(const Pmf& pmf) {
  if (pmf.empty()) throw std::invalid_argument("pmf: empty");
  double total = 0.0;
  for (double v : pmf) {
    if (!(v >= 0.0) || v > 1.0 + kExactTol)
      throw std::invalid_argument("pmf: entry outside [0, 1]");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbTol)
    throw std::invalid_argument("pmf: sum " + std::to_string(total) + " != 1");
}

double entropy(const Pmf& pmf) {
  validate_pmf(pmf);
  return entropy_raw(pmf);
}

double mutual_information(const JointTable& joint) {
  joint.validate();
  const double i = entropy_raw(joint.row_marginal()) + entropy_raw(joint.col_marginal()) -
                   entropy_raw(joint.probs);
  return i > 0.0 ? i : 0.0;
}

double conditional_entropy(const JointTable& joint) {
  joint.validate();
  const double h = entropy_raw(joint.probs) - entropy_raw(joint.col_marginal());
  return h > 0.0 ? h : 0.0;
}

double kl_divergence(const Pmf& p, const Pmf& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: alphabet mismatch");
  validate_pmf(p);
  validate_pmf(q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;  // 0·log(0/q) = 0
    if (q[i] <= 0.0) return kInf;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d > 0.0 ? d : 0.0;
}

double expected_log_loss(const JointTable& joint, const SoftDecoder& decoder) {
  joint.validate();
  if (decoder.out_alphabet != joint.col_alphabet || decoder.task_alphabet != joint.row_alphabet)
    throw std::invalid_argument("expected_log_loss: decoder alphabet mismatch");
  double loss = 0.0;
  for (std::size_t c = 0; c < joint.rows(); ++c) {
    for (std::size_t y = 0; y < joint.cols(); ++y) {
      const double w = joint.at(c, y);
      if (w <= 0.0) continue;
      const double d = decoder.at(y, c);
      if (d <= 0.0) return kInf;
      loss -= w * std::log2(d);
    }
  }
  return loss;
}

SoftDecoder optimal_soft_decoder(const JointTable& joint) {
  joint.validate();
  const Pmf py = joint.col_marginal();
  const Pmf pc = joint.row_marginal();
  SoftDecoder dec;
  dec.out_alphabet = joint.col_alphabet;
  dec.task_alphabet = joint.row_alphabet;
  dec.table.assign(joint.cols() * joint.rows(), 0.0);
  for (std::size_t y = 0; y < joint.cols(); ++y) {
    for (std::size_t c = 0; c < joint.rows(); ++c) {
      // Zero-probability outputs fall back to the prior so rows stay valid pmfs.
      dec.table[y * joint.rows() + c] = py[y] > 0.0 ? joint.at(c, y) / py[y] : pc[c];
    }
  }
  return dec;
}

}  // namespace funnelkit
