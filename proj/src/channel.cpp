#include "funnelkit/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace funnelkit {

void Channel::validate() const {
  if (rows.size() != in_size() * out_size())
    throw std::invalid_argument("Channel: rows size does not match alphabets");
  for (std::size_t x = 0; x < in_size(); ++x) {
    double total = 0.0;
    for (std::size_t y = 0; y < out_size(); ++y) {
      const double v = at(x, y);
      if (!(v >= 0.0) || v > 1.0 + kExactTol)
        throw std::invalid_argument("Channel: entry outside [0, 1]");
      total += v;
    }
    if (std::abs(total - 1.0) > kProbTol)
      throw std::invalid_argument("Channel: row " + std::to_string(x) + " sums to " +
                                  std::to_string(total));
  }
}

Channel Channel::identity(const Alphabet& alphabet) {
  Channel ch;
  ch.in_alphabet = alphabet;
  ch.out_alphabet = alphabet;
  ch.rows.assign(alphabet.size() * alphabet.size(), 0.0);
  for (std::size_t x = 0; x < alphabet.size(); ++x) ch.at(x, x) = 1.0;
  return ch;
}

Channel Channel::constant(const Alphabet& in, const std::string& out_label) {
  Channel ch;
  ch.in_alphabet = in;
  ch.out_alphabet = {out_label};
  ch.rows.assign(in.size(), 1.0);
  return ch;
}

JointTable push_joint(const Pmf& input, const Channel& ch) {
  if (input.size() != ch.in_size())
    throw std::invalid_argument("push_joint: input pmf does not match channel input alphabet");
  JointTable joint;
  joint.row_alphabet = ch.in_alphabet;
  joint.col_alphabet = ch.out_alphabet;
  joint.probs.resize(input.size() * ch.out_size());
  for (std::size_t x = 0; x < input.size(); ++x)
    for (std::size_t y = 0; y < ch.out_size(); ++y) joint.at(x, y) = input[x] * ch.at(x, y);
  return joint;
}

JointTable push_column(const JointTable& joint, const Channel& ch) {
  if (ch.in_alphabet != joint.col_alphabet)
    throw std::invalid_argument("push_column: channel input does not match joint columns");
  JointTable out;
  out.row_alphabet = joint.row_alphabet;
  out.col_alphabet = ch.out_alphabet;
  out.probs.assign(joint.rows() * ch.out_size(), 0.0);
  for (std::size_t r = 0; r < joint.rows(); ++r)
    for (std::size_t c = 0; c < joint.cols(); ++c) {
      const double w = joint.at(r, c);
      if (w <= 0.0) continue;
      for (std::size_t y = 0; y < ch.out_size(); ++y) out.at(r, y) += w * ch.at(c, y);
    }
  return out;
}

JointTable relabel_through(const std::vector<std::size_t>& map, const Alphabet& feature_alphabet,
                           const JointTable& joint) {
  if (map.size() != joint.rows())
    throw std::invalid_argument("relabel_through: map must be total on the row alphabet");
  JointTable out;
  out.row_alphabet = feature_alphabet;
  out.col_alphabet = joint.col_alphabet;
  out.probs.assign(feature_alphabet.size() * joint.cols(), 0.0);
  for (std::size_t r = 0; r < joint.rows(); ++r) {
    if (map[r] >= feature_alphabet.size())
      throw std::invalid_argument("relabel_through: map index out of range");
    for (std::size_t c = 0; c < joint.cols(); ++c) out.at(map[r], c) += joint.at(r, c);
  }
  return out;
}

namespace {

Alphabet alphabet_product(const std::vector<const Alphabet*>& parts) {
  std::size_t total = 1;
  for (const Alphabet* a : parts) {
    total *= a->size();
    if (total > kProductCap)
      throw std::invalid_argument("product alphabet exceeds the " +
                                  std::to_string(kProductCap) + "-symbol cap");
  }
  Alphabet out;
  out.reserve(total);
  std::vector<std::size_t> digits(parts.size(), 0);
  for (std::size_t rank = 0; rank < total; ++rank) {
    std::vector<std::string> labels(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) labels[k] = (*parts[k])[digits[k]];
    out.push_back(tuple_label(labels));
    for (std::size_t pos = parts.size(); pos-- > 0;) {
      if (++digits[pos] < parts[pos]->size()) break;
      digits[pos] = 0;
    }
  }
  return out;
}

}  // namespace

Channel product_channel(const std::vector<Channel>& channels) {
  if (channels.empty()) throw std::invalid_argument("product_channel: no channels");
  if (channels.size() == 1) return channels[0];
  std::vector<const Alphabet*> ins, outs;
  for (const auto& ch : channels) {
    ins.push_back(&ch.in_alphabet);
    outs.push_back(&ch.out_alphabet);
  }
  Channel prod;
  prod.in_alphabet = alphabet_product(ins);
  prod.out_alphabet = alphabet_product(outs);
  prod.rows.assign(prod.in_size() * prod.out_size(), 0.0);

  const std::size_t n = channels.size();
  std::vector<std::size_t> xd(n, 0);
  for (std::size_t x = 0; x < prod.in_size(); ++x) {
    std::vector<std::size_t> yd(n, 0);
    for (std::size_t y = 0; y < prod.out_size(); ++y) {
      double p = 1.0;
      for (std::size_t k = 0; k < n; ++k) p *= channels[k].at(xd[k], yd[k]);
      prod.at(x, y) = p;
      for (std::size_t pos = n; pos-- > 0;) {
        if (++yd[pos] < channels[pos].out_size()) break;
        yd[pos] = 0;
      }
    }
    for (std::size_t pos = n; pos-- > 0;) {
      if (++xd[pos] < channels[pos].in_size()) break;
      xd[pos] = 0;
    }
  }
  return prod;
}

Channel mixture_channel(const Channel& a, const Channel& b, double p, const std::string& tag_a,
                        const std::string& tag_b) {
  if (a.in_alphabet != b.in_alphabet)
    throw std::invalid_argument("mixture_channel: input alphabets differ");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mixture_channel: p outside [0, 1]");
  Channel mix;
  mix.in_alphabet = a.in_alphabet;
  for (const auto& label : a.out_alphabet) mix.out_alphabet.push_back(tag_a + ":" + label);
  for (const auto& label : b.out_alphabet) mix.out_alphabet.push_back(tag_b + ":" + label);
  mix.rows.assign(mix.in_size() * mix.out_size(), 0.0);
  for (std::size_t x = 0; x < mix.in_size(); ++x) {
    for (std::size_t y = 0; y < a.out_size(); ++y) mix.at(x, y) = p * a.at(x, y);
    for (std::size_t y = 0; y < b.out_size(); ++y)
      mix.at(x, a.out_size() + y) = (1.0 - p) * b.at(x, y);
  }
  return mix;
}

MechanismMetrics evaluate_mechanism(const DataModel& model, const Channel& ch) {
  const LabeledPmf px = joint_pmf(model, all_indices(model));
  if (ch.in_alphabet != px.alphabet)
    throw std::invalid_argument("evaluate_mechanism: channel input does not match model alphabet");
  const JointTable xy = push_joint(px.probs, ch);

  MechanismMetrics m;
  m.rate_bits = mutual_information(xy);
  m.leakage_bits =
      mutual_information(relabel_through(private_projection(model), private_product_alphabet(model), xy));
  for (const auto& task : model.tasks) {
    m.utility_bits.push_back(mutual_information(
        relabel_through(projection_map(model, task.components),
                        product_alphabet(model, task.components), xy)));
  }
  for (std::size_t i = 0; i < model.components.size(); ++i) {
    const std::vector<std::size_t> one{i};
    m.per_component_bits.push_back(mutual_information(
        relabel_through(projection_map(model, one), product_alphabet(model, one), xy)));
  }
  return m;
}

ComponentMetrics evaluate_component(const ComponentModel& comp, const Channel& ch) {
  if (ch.in_alphabet != comp.alphabet_x)
    throw std::invalid_argument("evaluate_component: channel input does not match component");
  const JointTable xy = push_joint(comp.pmf, ch);
  ComponentMetrics m;
  m.info_x_bits = mutual_information(xy);
  m.leakage_s_bits = mutual_information(relabel_through(comp.private_map, comp.alphabet_s, xy));
  return m;
}

}  // namespace funnelkit
