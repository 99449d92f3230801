#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "funnelkit/infotheory.hpp"

namespace funnelkit {

// Joint alphabets larger than this are refused (desk-scale guard).
inline constexpr std::size_t kProductCap = 4096;

// One independent data component: raw symbol law plus the deterministic
// private feature s = f(x).
struct ComponentModel {
  Alphabet alphabet_x;
  Pmf pmf;
  std::vector<std::size_t> private_map;  // x index -> index into alphabet_s
  Alphabet alphabet_s;

  Pmf s_pmf() const;
  double entropy_x() const { return entropy(pmf); }
  double entropy_s() const { return entropy(s_pmf()); }

  void validate() const;  // throws ParseError
};

struct TaskSpec {
  std::vector<std::size_t> components;        // sorted ascending, unique
  double gamma_bits = 0.0;                    // resolved target
  std::optional<double> distortion_bits;      // original D_k, when given
};

struct DataModel {
  std::vector<ComponentModel> components;
  std::vector<TaskSpec> tasks;
};

struct LabeledPmf {
  Alphabet alphabet;
  Pmf probs;
};

// Model-spec JSON ingestion/emission. load_model throws ParseError on
// structural problems and InfeasibleModelError when a gamma target is
// outside [0, sum H(X_i)].
DataModel load_model(const std::filesystem::path& path);
void save_model(const DataModel& model, const std::filesystem::path& path);
DataModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const DataModel& model);

// Lenient variant for diagnostics: returns the model together with the
// indices of tasks whose gamma is out of range instead of throwing.
struct LoadedModel {
  DataModel model;
  std::vector<std::size_t> violated_tasks;
};
LoadedModel load_model_report(const std::filesystem::path& path);

// Product law over a subset of components, lexicographic by component order.
LabeledPmf joint_pmf(const DataModel& model, const std::vector<std::size_t>& indices);

std::vector<std::size_t> all_indices(const DataModel& model);
Alphabet product_alphabet(const DataModel& model, const std::vector<std::size_t>& indices);

// Index map from the full product alphabet onto the sub-product over
// `indices` (used to marginalize joints onto tasks/components).
std::vector<std::size_t> projection_map(const DataModel& model,
                                        const std::vector<std::size_t>& indices);

// Componentwise private feature on the full product: x-index -> s-index.
Alphabet private_product_alphabet(const DataModel& model);
std::vector<std::size_t> private_projection(const DataModel& model);

// "(a,b,c)" tuple labels shared by every product-alphabet construction.
std::string tuple_label(const std::vector<std::string>& parts);

}  // namespace funnelkit
