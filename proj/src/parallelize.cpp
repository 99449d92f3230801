#include "funnelkit/parallelize.hpp"

#include <cmath>
#include <stdexcept>

#include "funnelkit/frl.hpp"

namespace funnelkit {

namespace {

// Digits of every full-product x index, one vector per component.
std::vector<std::vector<std::size_t>> component_digits(const DataModel& model) {
  std::vector<std::vector<std::size_t>> digits;
  for (std::size_t i = 0; i < model.components.size(); ++i)
    digits.push_back(projection_map(model, {i}));
  return digits;
}

JointTable model_channel_joint(const DataModel& model, const Channel& ch) {
  const LabeledPmf px = joint_pmf(model, all_indices(model));
  if (ch.in_alphabet != px.alphabet)
    throw std::invalid_argument("parallelize: channel input does not match model alphabet");
  return push_joint(px.probs, ch);
}

// Rank of a prefix tuple (digits of components 0..i-1) in the mixed-radix
// space given by `sizes`.
std::size_t prefix_rank(const std::vector<std::size_t>& digit_per_component,
                        const std::vector<std::size_t>& sizes) {
  std::size_t rank = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) rank = rank * sizes[k] + digit_per_component[k];
  return rank;
}

struct PrefixSpace {
  std::vector<std::size_t> sizes;  // one per prefix component
  std::size_t total = 1;

  std::vector<std::string> labels_of(std::size_t rank, const std::vector<const Alphabet*>& parts) const {
    std::vector<std::string> out(sizes.size());
    for (std::size_t k = sizes.size(); k-- > 0;) {
      out[k] = (*parts[k])[rank % sizes[k]];
      rank /= sizes[k];
    }
    return out;
  }
};

// One transform step shared by both constructions: for component i, build the
// channel X_i -> (prefix, Y) where the prefix collects a chosen digit of the
// components before i, conditioning on a chosen digit of component i.
//
// digit_for_prefix / digit_for_condition select S- or X-digits.
Channel prefix_conditional_channel(const DataModel& model, const JointTable& xy,
                                   std::size_t comp, bool s_prefix, bool s_condition) {
  const auto& comps = model.components;
  const auto digits = component_digits(model);

  PrefixSpace prefix;
  std::vector<const Alphabet*> prefix_alphabets;
  for (std::size_t j = 0; j < comp; ++j) {
    const std::size_t n = s_prefix ? comps[j].alphabet_s.size() : comps[j].alphabet_x.size();
    prefix.sizes.push_back(n);
    prefix.total *= n;
    prefix_alphabets.push_back(s_prefix ? &comps[j].alphabet_s : &comps[j].alphabet_x);
    if (prefix.total * xy.cols() > kProductCap)
      throw std::invalid_argument("parallelize: U alphabet exceeds the desk-scale cap");
  }

  const std::size_t ny = xy.cols();
  const std::size_t n_cond =
      s_condition ? comps[comp].alphabet_s.size() : comps[comp].alphabet_x.size();
  const std::size_t n_raw = prefix.total * ny;

  // mass[cond][prefix * ny + y] = p(prefix digits, y, cond digit).
  std::vector<std::vector<double>> mass(n_cond, std::vector<double>(n_raw, 0.0));
  std::vector<double> p_cond(n_cond, 0.0);
  for (std::size_t x = 0; x < xy.rows(); ++x) {
    std::vector<std::size_t> pre(comp);
    for (std::size_t j = 0; j < comp; ++j) {
      const std::size_t xd = digits[j][x];
      pre[j] = s_prefix ? comps[j].private_map[xd] : xd;
    }
    const std::size_t rank = prefix_rank(pre, prefix.sizes);
    const std::size_t xd_i = digits[comp][x];
    const std::size_t cond = s_condition ? comps[comp].private_map[xd_i] : xd_i;
    for (std::size_t y = 0; y < ny; ++y) {
      const double w = xy.at(x, y);
      if (w <= 0.0) continue;
      mass[cond][rank * ny + y] += w;
      p_cond[cond] += w;
    }
  }

  // Prune zero-probability (prefix, y) tuples; pruning a null symbol cannot
  // change any information measure.
  std::vector<std::size_t> keep;
  for (std::size_t u = 0; u < n_raw; ++u) {
    double total = 0.0;
    for (std::size_t c = 0; c < n_cond; ++c) total += mass[c][u];
    if (total > 0.0) keep.push_back(u);
  }

  Channel out;
  out.in_alphabet = comps[comp].alphabet_x;
  out.out_alphabet.reserve(keep.size());
  for (std::size_t u : keep) {
    const std::size_t rank = u / ny;
    const std::size_t y = u % ny;
    if (comp == 0) {
      out.out_alphabet.push_back(xy.col_alphabet[y]);
    } else {
      std::vector<std::string> parts = prefix.labels_of(rank, prefix_alphabets);
      parts.push_back(xy.col_alphabet[y]);
      out.out_alphabet.push_back(tuple_label(parts));
    }
  }
  out.rows.assign(out.in_size() * out.out_size(), 0.0);
  for (std::size_t x = 0; x < out.in_size(); ++x) {
    const std::size_t xd = x;
    const std::size_t cond = s_condition ? comps[comp].private_map[xd] : xd;
    if (p_cond[cond] <= 0.0) {
      out.at(x, 0) = 1.0;  // zero-probability input, row convention
      continue;
    }
    for (std::size_t k = 0; k < keep.size(); ++k)
      out.at(x, k) = mass[cond][keep[k]] / p_cond[cond];
  }
  return out;
}

MechanismMetrics metrics_from_components(const DataModel& model,
                                         const std::vector<Channel>& channels) {
  MechanismMetrics m;
  std::vector<ComponentMetrics> per(channels.size());
  for (std::size_t i = 0; i < channels.size(); ++i) {
    per[i] = evaluate_component(model.components[i], channels[i]);
    m.leakage_bits += per[i].leakage_s_bits;
    m.rate_bits += per[i].info_x_bits;
    m.per_component_bits.push_back(per[i].info_x_bits);
  }
  for (const auto& task : model.tasks) {
    double u = 0.0;
    for (std::size_t i : task.components) u += per[i].info_x_bits;
    m.utility_bits.push_back(u);
  }
  return m;
}

ParallelizationReport make_report(const DataModel& model, const Channel& ch,
                                  const std::vector<Channel>& transformed_channels) {
  ParallelizationReport report;
  report.original = evaluate_mechanism(model, ch);
  report.transformed = metrics_from_components(model, transformed_channels);
  report.leakage_delta = report.transformed.leakage_bits - report.original.leakage_bits;
  report.rate_delta = report.transformed.rate_bits - report.original.rate_bits;
  for (std::size_t k = 0; k < model.tasks.size(); ++k)
    report.utility_deltas.push_back(report.transformed.utility_bits[k] -
                                    report.original.utility_bits[k]);
  for (std::size_t i = 0; i < model.components.size(); ++i)
    report.per_component_deltas.push_back(report.transformed.per_component_bits[i] -
                                          report.original.per_component_bits[i]);
  return report;
}

}  // namespace

std::vector<Channel> build_U(const DataModel& model, const Channel& ch) {
  const JointTable xy = model_channel_joint(model, ch);
  std::vector<Channel> out;
  for (std::size_t i = 0; i < model.components.size(); ++i)
    out.push_back(prefix_conditional_channel(model, xy, i, /*s_prefix=*/true,
                                             /*s_condition=*/true));
  return out;
}

ParallelizedMechanism parallelize_privatization(const DataModel& model, const Channel& ch) {
  const JointTable xy = model_channel_joint(model, ch);
  ParallelizedMechanism mech;

  for (std::size_t i = 0; i < model.components.size(); ++i) {
    const ComponentModel& comp = model.components[i];
    const Channel u_ch =
        prefix_conditional_channel(model, xy, i, /*s_prefix=*/true, /*s_condition=*/true);
    const std::size_t nu = u_ch.out_size();
    const std::size_t ns = comp.alphabet_s.size();
    const std::size_t nx = comp.alphabet_x.size();

    // Joint over (X_i, W) with W = (U_i, S_i); Z_i completes X_i from W.
    JointTable xw;
    xw.row_alphabet = comp.alphabet_x;
    xw.col_alphabet.reserve(nu * ns);
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t s = 0; s < ns; ++s)
        xw.col_alphabet.push_back(tuple_label({u_ch.out_alphabet[u], comp.alphabet_s[s]}));
    xw.probs.assign(nx * nu * ns, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t s = comp.private_map[x];
      if (comp.pmf[x] <= 0.0) continue;
      for (std::size_t u = 0; u < nu; ++u)
        xw.at(x, u * ns + s) = comp.pmf[x] * u_ch.at(x, u);
    }
    const FrlRepresentation rep = functional_representation(xw);
    const std::size_t nz = rep.z_pmf.size();

    // p_W = column marginal of the (X_i, W) joint.
    std::vector<double> pw(nu * ns, 0.0);
    for (std::size_t w = 0; w < nu * ns; ++w) {
      double total = 0.0;
      for (std::size_t x = 0; x < nx; ++x) total += xw.at(x, w);
      pw[w] = total;
    }

    Channel y_ch;
    y_ch.in_alphabet = comp.alphabet_x;
    y_ch.out_alphabet.reserve(nu * nz);
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t z = 0; z < nz; ++z)
        y_ch.out_alphabet.push_back(tuple_label({u_ch.out_alphabet[u], rep.z_alphabet[z]}));
    y_ch.rows.assign(nx * nu * nz, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      if (comp.pmf[x] <= 0.0) {
        y_ch.at(x, 0) = 1.0;
        continue;
      }
      const std::size_t s = comp.private_map[x];
      double total = 0.0;
      for (std::size_t u = 0; u < nu; ++u) {
        const std::size_t w = u * ns + s;
        if (pw[w] <= 0.0) continue;
        for (std::size_t z = 0; z < nz; ++z) {
          if (rep.assigned(w, z) != x) continue;
          const double v = pw[w] * rep.z_pmf[z] / comp.pmf[x];
          y_ch.at(x, u * nz + z) = v;
          total += v;
        }
      }
      if (total > 0.0 && std::abs(total - 1.0) > kExactTol) {
        if (std::abs(total - 1.0) > 1e-6)
          throw std::logic_error("parallelize: representation row mass off by more than 1e-6");
        for (std::size_t c = 0; c < nu * nz; ++c) y_ch.at(x, c) /= total;
      }
    }
    mech.components.push_back(std::move(y_ch));
  }

  mech.report = make_report(model, ch, mech.components);
  return mech;
}

ParallelizedMechanism parallelize_compression(const DataModel& model, const Channel& ch) {
  const JointTable xy = model_channel_joint(model, ch);
  ParallelizedMechanism mech;
  for (std::size_t i = 0; i < model.components.size(); ++i)
    mech.components.push_back(prefix_conditional_channel(model, xy, i, /*s_prefix=*/false,
                                                         /*s_condition=*/false));
  mech.report = make_report(model, ch, mech.components);
  return mech;
}

Channel assemble_product(const ParallelizedMechanism& mech) {
  return product_channel(mech.components);
}

}  // namespace funnelkit
