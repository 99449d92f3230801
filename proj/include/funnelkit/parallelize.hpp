#pragma once

#include <vector>

#include "funnelkit/channel.hpp"
#include "funnelkit/model.hpp"

namespace funnelkit {

// Before/after measures of a parallelization transform, with the signed gaps
// of each claimed relation (transformed minus original).
struct ParallelizationReport {
  MechanismMetrics original;
  MechanismMetrics transformed;
  bool product_form_ok = true;
  double leakage_delta = 0.0;                 // I(S;·)
  double rate_delta = 0.0;                    // I(X;·); H(X|·) gap is its negation
  std::vector<double> utility_deltas;         // I(C_k;·) per task
  std::vector<double> per_component_deltas;   // I(X_i;·) per component
};

// Product-form mechanism kept per component; the assembled product alphabet
// routinely exceeds the desk-scale cap, so it is materialized on demand only.
struct ParallelizedMechanism {
  std::vector<Channel> components;  // X_i -> Y'_i
  ParallelizationReport report;
};

// Per-component channels X_i -> U_i with U_i drawn as (S_1..S_{i-1}, Y) given
// S_i; preserves the leakage of `ch` exactly. Zero-probability tuples are
// pruned from the U alphabets.
std::vector<Channel> build_U(const DataModel& model, const Channel& ch);

// Privatization transform: Y'_i = (U_i, Z_i) with Z_i the
// functional-representation completion of X_i given (U_i, S_i). Leakage is
// preserved and every task utility is at least the original.
ParallelizedMechanism parallelize_privatization(const DataModel& model, const Channel& ch);

// Compression-style transform: Y''_i drawn as (X_1..X_{i-1}, Y) given X_i.
// Preserves H(X|Y) and weakly improves task and per-component information;
// it may increase leakage, which is why the privatization path differs.
ParallelizedMechanism parallelize_compression(const DataModel& model, const Channel& ch);

// Materializes the product channel (throws beyond the product-alphabet cap).
Channel assemble_product(const ParallelizedMechanism& mech);

}  // namespace funnelkit
