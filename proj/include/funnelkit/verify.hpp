#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "funnelkit/corpus.hpp"

namespace funnelkit {

struct SuiteResult {
  std::string name;
  bool pass = false;
  nlohmann::json details;
};

// Closed-form funnel: synthesized mechanisms hit the claimed point on a grid
// of released amounts, and randomized search never beats the closed form.
// `negative_control` corrupts one synthesized channel to prove the checks can
// fail (verifier non-vacuity).
SuiteResult run_funnel_suite(std::uint64_t seed, std::size_t search_trials,
                             bool negative_control = false);

// Functional representation: independence, determinism, reconstruction, and
// the leakage-free specialization.
SuiteResult run_frl_suite(std::uint64_t seed);

// Allocation LP vs. independent vertex enumeration.
SuiteResult run_lp_suite(std::uint64_t seed);

// Privatization transform preserves leakage and weakly improves utilities.
SuiteResult run_privatization_suite(std::uint64_t seed);

// Compression transform preserves H(X|Y) and weakly improves information.
SuiteResult run_compression_suite(std::uint64_t seed);

// Posterior decoder achieves H(C|Y); random decoders never go below it.
SuiteResult run_logloss_suite(std::uint64_t seed, std::size_t decoder_trials);

// DP epsilon does not increase under parallelization; randomized-response
// spot value.
SuiteResult run_dp_suite(std::uint64_t seed);

// Documented parity worked example end to end.
SuiteResult run_worked_example_suite();

// All suites; the summary contains no volatile fields, so equal seeds give
// byte-identical output.
nlohmann::json run_all_suites(std::uint64_t seed, std::size_t search_trials,
                              bool negative_control = false);

}  // namespace funnelkit
