#include "funnelkit/corpus.hpp"

#include <algorithm>
#include <string>

#include "funnelkit/funnel.hpp"

namespace funnelkit {

namespace {

std::vector<std::string> symbol_labels(const char* stem, std::size_t n) {
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = stem + std::to_string(i);
  return out;
}

}  // namespace

ComponentModel random_component(SplitMix64& rng, std::size_t max_symbols) {
  const std::size_t nx = 2 + rng.next_below(max_symbols - 1);
  ComponentModel comp;
  comp.alphabet_x = symbol_labels("x", nx);
  comp.pmf = random_pmf(rng, nx);

  const std::uint64_t style = rng.next_below(5);
  std::vector<std::size_t> raw(nx);
  if (style == 0) {
    for (std::size_t x = 0; x < nx; ++x) raw[x] = x;  // S = X
  } else if (style == 1) {
    std::fill(raw.begin(), raw.end(), 0);  // S constant
  } else {
    const std::size_t groups = 1 + rng.next_below(nx);
    for (std::size_t x = 0; x < nx; ++x) raw[x] = rng.next_below(groups);
  }
  // Compact the image so alphabet_s is exactly the set of used values.
  std::vector<std::size_t> relabel(nx, SIZE_MAX);
  std::size_t next = 0;
  comp.private_map.resize(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    if (relabel[raw[x]] == SIZE_MAX) relabel[raw[x]] = next++;
    comp.private_map[x] = relabel[raw[x]];
  }
  comp.alphabet_s = symbol_labels("s", next);
  return comp;
}

DataModel random_model(SplitMix64& rng, std::size_t max_components, std::size_t max_tasks,
                       std::size_t max_symbols, std::size_t joint_cap) {
  DataModel model;
  const std::size_t n = 1 + rng.next_below(max_components);
  std::size_t joint = 1;
  for (std::size_t i = 0; i < n; ++i) {
    ComponentModel comp = random_component(rng, max_symbols);
    while (joint * comp.alphabet_x.size() > joint_cap)
      comp = random_component(rng, std::max<std::size_t>(2, max_symbols / 2));
    joint *= comp.alphabet_x.size();
    model.components.push_back(std::move(comp));
  }
  const std::size_t k = 1 + rng.next_below(max_tasks);
  for (std::size_t t = 0; t < k; ++t) {
    TaskSpec task;
    for (std::size_t i = 0; i < n; ++i)
      if (rng.next_below(2) == 0) task.components.push_back(i);
    if (task.components.empty()) task.components.push_back(rng.next_below(n));
    task.gamma_bits = 0.0;
    model.tasks.push_back(std::move(task));
  }
  return model;
}

Channel random_channel(SplitMix64& rng, const Alphabet& in, std::size_t out_size) {
  Channel ch;
  ch.in_alphabet = in;
  ch.out_alphabet = symbol_labels("y", out_size);
  ch.rows.reserve(in.size() * out_size);
  for (std::size_t x = 0; x < in.size(); ++x) {
    const Pmf row = random_pmf(rng, out_size);
    ch.rows.insert(ch.rows.end(), row.begin(), row.end());
  }
  return ch;
}

JointTable random_joint(SplitMix64& rng, std::size_t rows, std::size_t cols, bool sparsify) {
  JointTable joint;
  joint.row_alphabet = symbol_labels("c", rows);
  joint.col_alphabet = symbol_labels("y", cols);
  joint.probs = random_pmf(rng, rows * cols);
  if (sparsify) {
    const std::size_t zeros = rng.next_below(rows * cols - 1);
    for (std::size_t k = 0; k < zeros; ++k) joint.probs[rng.next_below(rows * cols)] = 0.0;
    double total = 0.0;
    for (double v : joint.probs) total += v;
    if (total <= 0.0) {
      joint.probs.assign(rows * cols, 0.0);
      joint.probs[0] = 1.0;
    } else {
      for (double& v : joint.probs) v /= total;
    }
  }
  return joint;
}

std::vector<ComponentModel> funnel_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<ComponentModel> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng(derive_seed(seed, 0x10000 + i));
    out.push_back(random_component(rng, 6));
  }
  return out;
}

std::vector<JointTable> frl_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<JointTable> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng(derive_seed(seed, 0x20000 + i));
    const std::size_t nx = 2 + rng.next_below(5);
    const std::size_t nw = 2 + rng.next_below(5);
    out.push_back(random_joint(rng, nx, nw, /*sparsify=*/i % 4 == 0));
  }
  return out;
}

std::vector<JointTable> logloss_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<JointTable> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng(derive_seed(seed, 0x30000 + i));
    const std::size_t nc = 2 + rng.next_below(5);
    const std::size_t ny = 2 + rng.next_below(5);
    out.push_back(random_joint(rng, nc, ny, /*sparsify=*/i % 5 == 0));
  }
  return out;
}

std::vector<std::pair<DataModel, Channel>> transform_corpus(std::uint64_t seed,
                                                           std::size_t count) {
  std::vector<std::pair<DataModel, Channel>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng(derive_seed(seed, 0x40000 + i));
    DataModel model = random_model(rng, 3, 3, 4, 64);
    const Alphabet in = product_alphabet(model, all_indices(model));
    const std::size_t ny = 2 + rng.next_below(3);
    Channel ch = random_channel(rng, in, ny);  // dense rows: non-product generically
    out.emplace_back(std::move(model), std::move(ch));
  }
  return out;
}

std::vector<DataModel> lp_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<DataModel> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SplitMix64 rng(derive_seed(seed, 0x50000 + i));
    DataModel model = random_model(rng, 5, 4, 5, kProductCap);
    // Target styles: leakage-free region, tau-tight, interior, forced corner,
    // trivial zero, and occasionally infeasible.
    for (auto& task : model.tasks) {
      double sum_tau = 0.0, sum_h = 0.0;
      for (std::size_t c : task.components) {
        sum_tau += threshold(model.components[c]);
        sum_h += model.components[c].entropy_x();
      }
      switch (rng.next_below(6)) {
        case 0: task.gamma_bits = 0.0; break;
        case 1: task.gamma_bits = sum_tau * rng.next_double(); break;
        case 2: task.gamma_bits = sum_tau; break;
        case 3: task.gamma_bits = sum_tau + (sum_h - sum_tau) * rng.next_double(); break;
        case 4: task.gamma_bits = sum_h; break;
        case 5: task.gamma_bits = sum_h + (i % 3 == 0 ? 0.5 : 0.0); break;
      }
    }
    out.push_back(std::move(model));
  }
  return out;
}

DataModel parity_model() {
  DataModel model;
  for (int i = 0; i < 2; ++i) {
    ComponentModel comp;
    comp.alphabet_x = {"0", "1", "2", "3"};
    comp.pmf = {0.25, 0.25, 0.25, 0.25};
    comp.private_map = {0, 1, 0, 1};
    comp.alphabet_s = {"even", "odd"};
    model.components.push_back(std::move(comp));
  }
  TaskSpec t1;
  t1.components = {0};
  t1.gamma_bits = 1.5;
  TaskSpec t2;
  t2.components = {0, 1};
  t2.gamma_bits = 2.5;
  model.tasks = {t1, t2};
  return model;
}

}  // namespace funnelkit
