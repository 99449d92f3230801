#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "funnelkit/channel.hpp"
#include "funnelkit/infotheory.hpp"
#include "funnelkit/model.hpp"
#include "funnelkit/rng.hpp"

namespace funnelkit {

// Seeded generators for the verification corpora. Everything downstream of a
// seed is bit-reproducible.

// Random component: 2..max_symbols raw symbols, Dirichlet(1) law, private map
// drawn among identity / constant / random surjection (image-compacted).
ComponentModel random_component(SplitMix64& rng, std::size_t max_symbols);

// Random model with joint alphabet capped at `joint_cap`; tasks are random
// non-empty subsets with gamma = 0 (set targets afterwards when needed).
DataModel random_model(SplitMix64& rng, std::size_t max_components, std::size_t max_tasks,
                       std::size_t max_symbols, std::size_t joint_cap);

Channel random_channel(SplitMix64& rng, const Alphabet& in, std::size_t out_size);

// Random joint; when sparsify is set, a random subset of entries is zeroed
// (keeping at least one) to exercise zero-probability paths.
JointTable random_joint(SplitMix64& rng, std::size_t rows, std::size_t cols, bool sparsify);

// Corpora used by the verification suites.
std::vector<ComponentModel> funnel_corpus(std::uint64_t seed, std::size_t count);
std::vector<JointTable> frl_corpus(std::uint64_t seed, std::size_t count);
std::vector<JointTable> logloss_corpus(std::uint64_t seed, std::size_t count);
std::vector<std::pair<DataModel, Channel>> transform_corpus(std::uint64_t seed, std::size_t count);
std::vector<DataModel> lp_corpus(std::uint64_t seed, std::size_t count);

// The documented two-component parity worked example.
DataModel parity_model();

}  // namespace funnelkit
