#include <doctest.h>

#include <cmath>
#include <limits>

#include "funnelkit/corpus.hpp"
#include "funnelkit/dp.hpp"
#include "funnelkit/parallelize.hpp"

using namespace funnelkit;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DataModel binary_rr_model() {
  DataModel model;
  ComponentModel comp;
  comp.alphabet_x = {"0", "1"};
  comp.pmf = {0.5, 0.5};
  comp.private_map = {0, 1};
  comp.alphabet_s = {"0", "1"};
  model.components = {comp};
  return model;
}

}  // namespace

TEST_CASE("epsilon endpoint values") {
  const DataModel model = binary_rr_model();
  SUBCASE("constant channel has epsilon 0") {
    const DpReport r = epsilon(model, Channel::constant({"0", "1"}));
    CHECK(r.epsilon_nats == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  }
  SUBCASE("revealing S exactly is infinite") {
    const DpReport r = epsilon(model, Channel::identity({"0", "1"}));
    CHECK(r.epsilon_nats == kInf);
    REQUIRE(r.witness.has_value());
  }
  SUBCASE("randomized response with flip 0.25 gives ln 3") {
    Channel rr;
    rr.in_alphabet = {"0", "1"};
    rr.out_alphabet = {"0", "1"};
    rr.rows = {0.75, 0.25, 0.25, 0.75};
    const DpReport r = epsilon(model, rr);
    CHECK(r.epsilon_nats == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  }
}

TEST_CASE("epsilon of a product is the max of the per-component epsilons") {
  const auto corpus = transform_corpus(600, 8);
  for (const auto& [model, _] : corpus) {
    SplitMix64 rng(derive_seed(600, 999));
    std::vector<Channel> parts;
    std::size_t product = 1;
    for (const auto& comp : model.components) {
      parts.push_back(random_channel(rng, comp.alphabet_x, 2 + rng.next_below(2)));
      product *= parts.back().out_size();
    }
    if (product > kProductCap) continue;
    double max_comp = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i)
      max_comp = std::max(max_comp,
                          epsilon_component(model.components[i], parts[i]).epsilon_nats);
    const double joint_eps = epsilon(model, product_channel(parts)).epsilon_nats;
    if (std::isinf(max_comp)) {
      CHECK(std::isinf(joint_eps));
    } else {
      CHECK(joint_eps == doctest::Approx(max_comp).epsilon(1e-9).scale(1));
    }
  }
}

TEST_CASE("group property holds at Hamming distance two") {
  const auto corpus = transform_corpus(601, 6);
  for (const auto& [model, ch] : corpus) {
    if (model.components.size() < 2) continue;
    const double eps = epsilon(model, ch).epsilon_nats;
    if (std::isinf(eps)) continue;

    const LabeledPmf px = joint_pmf(model, all_indices(model));
    const JointTable xy = push_joint(px.probs, ch);
    const JointTable sy =
        relabel_through(private_projection(model), private_product_alphabet(model), xy);
    const Pmf ps = sy.row_marginal();

    // Pairs differing in the first two coordinates (when both are non-trivial).
    std::vector<std::size_t> sizes;
    for (const auto& comp : model.components) sizes.push_back(comp.alphabet_s.size());
    if (sizes[0] < 2 || sizes[1] < 2) continue;
    std::size_t stride1 = 1;
    for (std::size_t k = 2; k < sizes.size(); ++k) stride1 *= sizes[k];
    const std::size_t stride0 = stride1 * sizes[1];
    for (std::size_t s = 0; s < ps.size(); ++s) {
      const std::size_t d0 = s / stride0 % sizes[0];
      const std::size_t d1 = s / stride1 % sizes[1];
      if (d0 + 1 >= sizes[0] || d1 + 1 >= sizes[1]) continue;
      const std::size_t s2 = s + stride0 + stride1;
      if (ps[s] <= 0.0 || ps[s2] <= 0.0) continue;
      for (std::size_t y = 0; y < sy.cols(); ++y) {
        const double pa = sy.at(s, y) / ps[s];
        const double pb = sy.at(s2, y) / ps[s2];
        if (pa <= 0.0 || pb <= 0.0) continue;
        CHECK(std::abs(std::log(pa) - std::log(pb)) <= 2 * eps + 1e-9);
      }
    }
  }
}

TEST_CASE("parallelization never increases epsilon") {
  SUBCASE("product-channel input keeps epsilon") {
    const DataModel model = parity_model();
    SplitMix64 rng(77);
    std::vector<Channel> parts;
    for (const auto& comp : model.components)
      parts.push_back(random_channel(rng, comp.alphabet_x, 3));
    const DpParallelizationResult r =
        verify_dp_parallelization(model, product_channel(parts));
    CHECK(r.ok);
    if (!std::isinf(r.eps_original_nats))
      CHECK(r.eps_parallelized_nats ==
            doctest::Approx(r.eps_original_nats).epsilon(1e-9).scale(1));
  }
  SUBCASE("constant channel") {
    const DataModel model = parity_model();
    const Alphabet joint_x = product_alphabet(model, all_indices(model));
    const DpParallelizationResult r =
        verify_dp_parallelization(model, Channel::constant(joint_x));
    CHECK(r.ok);
    CHECK(r.eps_parallelized_nats <= 1e-9);
  }
  SUBCASE("seeded non-product channels") {
    const auto corpus = transform_corpus(602, 15);
    for (const auto& [model, ch] : corpus) {
      const DpParallelizationResult r = verify_dp_parallelization(model, ch);
      CHECK(r.ok);
    }
  }
}
