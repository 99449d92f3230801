#include "funnelkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "funnelkit/errors.hpp"

namespace funnelkit {

using nlohmann::json;

Pmf ComponentModel::s_pmf() const {
  Pmf p(alphabet_s.size(), 0.0);
  for (std::size_t x = 0; x < pmf.size(); ++x) p[private_map[x]] += pmf[x];
  return p;
}

void ComponentModel::validate() const {
  if (alphabet_x.empty()) throw ParseError("component: empty alphabet");
  if (pmf.size() != alphabet_x.size())
    throw ParseError("component: pmf length does not match alphabet");
  double total = 0.0;
  for (double v : pmf) {
    if (!(v >= 0.0) || v > 1.0) throw ParseError("component: pmf entry outside [0, 1]");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbTol) {
    std::ostringstream os;
    os << "component: pmf sums to " << total << ", expected 1";
    throw ParseError(os.str());
  }
  if (private_map.size() != alphabet_x.size())
    throw ParseError("component: private_map must cover every raw symbol");
  std::vector<bool> hit(alphabet_s.size(), false);
  for (std::size_t s : private_map) {
    if (s >= alphabet_s.size()) throw ParseError("component: private_map index out of range");
    hit[s] = true;
  }
  // alphabet_s must be exactly the image of the map.
  for (std::size_t s = 0; s < hit.size(); ++s) {
    if (!hit[s])
      throw ParseError("component: private symbol '" + alphabet_s[s] + "' is not in the image");
  }
  std::set<std::string> seen(alphabet_x.begin(), alphabet_x.end());
  if (seen.size() != alphabet_x.size()) throw ParseError("component: duplicate raw symbol label");
  std::set<std::string> seen_s(alphabet_s.begin(), alphabet_s.end());
  if (seen_s.size() != alphabet_s.size())
    throw ParseError("component: duplicate private symbol label");
}

std::string tuple_label(const std::vector<std::string>& parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  out += ")";
  return out;
}

std::vector<std::size_t> all_indices(const DataModel& model) {
  std::vector<std::size_t> idx(model.components.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

namespace {

std::size_t checked_product_size(const std::vector<std::size_t>& sizes) {
  std::size_t total = 1;
  for (std::size_t n : sizes) {
    total *= n;
    if (total > kProductCap)
      throw std::invalid_argument("product alphabet exceeds the " +
                                  std::to_string(kProductCap) + "-symbol cap");
  }
  return total;
}

// Enumerates the mixed-radix product lexicographically, component 0 slowest.
template <typename Fn>
void for_each_tuple(const std::vector<std::size_t>& sizes, Fn&& fn) {
  const std::size_t total = checked_product_size(sizes);
  std::vector<std::size_t> digits(sizes.size(), 0);
  for (std::size_t rank = 0; rank < total; ++rank) {
    fn(rank, digits);
    for (std::size_t pos = sizes.size(); pos-- > 0;) {
      if (++digits[pos] < sizes[pos]) break;
      digits[pos] = 0;
    }
  }
}

std::vector<std::size_t> component_sizes(const DataModel& model,
                                         const std::vector<std::size_t>& indices) {
  std::vector<std::size_t> sizes;
  sizes.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= model.components.size()) throw std::invalid_argument("component index out of range");
    sizes.push_back(model.components[i].alphabet_x.size());
  }
  return sizes;
}

}  // namespace

Alphabet product_alphabet(const DataModel& model, const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw std::invalid_argument("product_alphabet: empty index set");
  if (indices.size() == 1) return model.components[indices[0]].alphabet_x;
  const auto sizes = component_sizes(model, indices);
  Alphabet out(checked_product_size(sizes));
  for_each_tuple(sizes, [&](std::size_t rank, const std::vector<std::size_t>& digits) {
    std::vector<std::string> parts(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k)
      parts[k] = model.components[indices[k]].alphabet_x[digits[k]];
    out[rank] = tuple_label(parts);
  });
  return out;
}

LabeledPmf joint_pmf(const DataModel& model, const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw std::invalid_argument("joint_pmf: empty index set");
  LabeledPmf out;
  out.alphabet = product_alphabet(model, indices);
  const auto sizes = component_sizes(model, indices);
  out.probs.assign(out.alphabet.size(), 0.0);
  for_each_tuple(sizes, [&](std::size_t rank, const std::vector<std::size_t>& digits) {
    double p = 1.0;
    for (std::size_t k = 0; k < indices.size(); ++k)
      p *= model.components[indices[k]].pmf[digits[k]];
    out.probs[rank] = p;
  });
  return out;
}

std::vector<std::size_t> projection_map(const DataModel& model,
                                        const std::vector<std::size_t>& indices) {
  const auto full = all_indices(model);
  const auto sizes = component_sizes(model, full);
  // Sub-product strides for the selected components.
  std::vector<std::size_t> sub_sizes = component_sizes(model, indices);
  std::vector<std::size_t> strides(indices.size());
  std::size_t stride = 1;
  for (std::size_t k = indices.size(); k-- > 0;) {
    strides[k] = stride;
    stride *= sub_sizes[k];
  }
  std::vector<std::size_t> map(checked_product_size(sizes));
  for_each_tuple(sizes, [&](std::size_t rank, const std::vector<std::size_t>& digits) {
    std::size_t sub = 0;
    for (std::size_t k = 0; k < indices.size(); ++k) sub += digits[indices[k]] * strides[k];
    map[rank] = sub;
  });
  return map;
}

Alphabet private_product_alphabet(const DataModel& model) {
  if (model.components.size() == 1) return model.components[0].alphabet_s;
  std::vector<std::size_t> sizes;
  for (const auto& c : model.components) sizes.push_back(c.alphabet_s.size());
  Alphabet out(checked_product_size(sizes));
  for_each_tuple(sizes, [&](std::size_t rank, const std::vector<std::size_t>& digits) {
    std::vector<std::string> parts(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k)
      parts[k] = model.components[k].alphabet_s[digits[k]];
    out[rank] = tuple_label(parts);
  });
  return out;
}

std::vector<std::size_t> private_projection(const DataModel& model) {
  const auto sizes = component_sizes(model, all_indices(model));
  std::vector<std::size_t> s_strides(model.components.size());
  std::size_t stride = 1;
  for (std::size_t k = model.components.size(); k-- > 0;) {
    s_strides[k] = stride;
    stride *= model.components[k].alphabet_s.size();
  }
  std::vector<std::size_t> map(checked_product_size(sizes));
  for_each_tuple(sizes, [&](std::size_t rank, const std::vector<std::size_t>& digits) {
    std::size_t s = 0;
    for (std::size_t k = 0; k < digits.size(); ++k)
      s += model.components[k].private_map[digits[k]] * s_strides[k];
    map[rank] = s;
  });
  return map;
}

namespace {

Alphabet parse_labels(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + ": expected non-empty array");
  Alphabet out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ParseError(std::string(what) + ": labels must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

// Validates tasks, resolves distortion targets to gamma, and range-checks.
std::vector<std::size_t> resolve_gammas(DataModel& model) {
  std::vector<std::size_t> violated;
  for (std::size_t k = 0; k < model.tasks.size(); ++k) {
    TaskSpec& task = model.tasks[k];
    if (task.components.empty()) throw ParseError("task " + std::to_string(k) + ": empty component set");
    std::sort(task.components.begin(), task.components.end());
    task.components.erase(std::unique(task.components.begin(), task.components.end()),
                          task.components.end());
    double h_c = 0.0;
    for (std::size_t i : task.components) {
      if (i >= model.components.size())
        throw ParseError("task " + std::to_string(k) + ": component index out of range");
      h_c += model.components[i].entropy_x();
    }
    if (task.distortion_bits) {
      // Independence makes H(C_k) the sum of the member entropies.
      task.gamma_bits = h_c - *task.distortion_bits;
    }
    if (task.gamma_bits < -kProbTol || task.gamma_bits > h_c + kProbTol) violated.push_back(k);
  }
  return violated;
}

LoadedModel load_impl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("model file " + path.string() + ": " + e.what());
  }
  LoadedModel loaded;
  loaded.model = model_from_json(j);
  loaded.violated_tasks = resolve_gammas(loaded.model);
  return loaded;
}

}  // namespace

DataModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("components"))
    throw ParseError("model: missing \"components\"");
  DataModel model;
  for (const auto& jc : j.at("components")) {
    ComponentModel comp;
    comp.alphabet_x = parse_labels(jc.at("alphabet"), "component alphabet");
    if (!jc.contains("pmf") || !jc.at("pmf").is_array())
      throw ParseError("component: missing pmf array");
    for (const auto& v : jc.at("pmf")) comp.pmf.push_back(v.get<double>());
    if (!jc.contains("private_map") || !jc.at("private_map").is_array())
      throw ParseError("component: missing private_map array");
    for (const auto& v : jc.at("private_map")) {
      const auto idx = v.get<long long>();
      if (idx < 0) throw ParseError("component: negative private_map index");
      comp.private_map.push_back(static_cast<std::size_t>(idx));
    }
    comp.alphabet_s = parse_labels(jc.at("private_alphabet"), "private alphabet");
    comp.validate();
    // Normalize once at load; sums are never touched afterwards.
    double total = 0.0;
    for (double v : comp.pmf) total += v;
    for (double& v : comp.pmf) v /= total;
    model.components.push_back(std::move(comp));
  }
  if (model.components.empty()) throw ParseError("model: no components");
  if (j.contains("tasks")) {
    for (const auto& jt : j.at("tasks")) {
      TaskSpec task;
      if (!jt.contains("components")) throw ParseError("task: missing components");
      for (const auto& v : jt.at("components")) {
        const auto idx = v.get<long long>();
        if (idx < 0) throw ParseError("task: negative component index");
        task.components.push_back(static_cast<std::size_t>(idx));
      }
      const bool has_gamma = jt.contains("gamma_bits");
      const bool has_dist = jt.contains("distortion_bits");
      if (has_gamma == has_dist)
        throw ParseError("task: exactly one of gamma_bits/distortion_bits required");
      if (has_gamma) task.gamma_bits = jt.at("gamma_bits").get<double>();
      if (has_dist) task.distortion_bits = jt.at("distortion_bits").get<double>();
      model.tasks.push_back(std::move(task));
    }
  }
  return model;
}

nlohmann::json model_to_json(const DataModel& model) {
  json j;
  j["components"] = json::array();
  for (const auto& comp : model.components) {
    json jc;
    jc["alphabet"] = comp.alphabet_x;
    jc["pmf"] = comp.pmf;
    jc["private_map"] = comp.private_map;
    jc["private_alphabet"] = comp.alphabet_s;
    j["components"].push_back(jc);
  }
  j["tasks"] = json::array();
  for (const auto& task : model.tasks) {
    json jt;
    jt["components"] = task.components;
    if (task.distortion_bits)
      jt["distortion_bits"] = *task.distortion_bits;
    else
      jt["gamma_bits"] = task.gamma_bits;
    j["tasks"].push_back(jt);
  }
  return j;
}

DataModel load_model(const std::filesystem::path& path) {
  LoadedModel loaded = load_impl(path);
  if (!loaded.violated_tasks.empty()) {
    std::ostringstream os;
    os << "model infeasible: gamma outside [0, sum H(X_i)] for task(s)";
    for (std::size_t k : loaded.violated_tasks) os << " " << k;
    throw InfeasibleModelError(os.str(), loaded.violated_tasks);
  }
  return std::move(loaded.model);
}

LoadedModel load_model_report(const std::filesystem::path& path) { return load_impl(path); }

void save_model(const DataModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path.string());
  out << model_to_json(model).dump(2) << "\n";
}

}  // namespace funnelkit
