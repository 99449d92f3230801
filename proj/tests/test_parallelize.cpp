#include <doctest.h>

#include <cmath>

#include "funnelkit/corpus.hpp"
#include "funnelkit/parallelize.hpp"

using namespace funnelkit;

namespace {

DataModel two_parity_components() {
  DataModel model = parity_model();
  model.tasks[0].gamma_bits = 0.0;
  model.tasks[1].gamma_bits = 0.0;
  return model;
}

}  // namespace

TEST_CASE("build_U base case N = 1") {
  DataModel model;
  ComponentModel comp;
  comp.alphabet_x = {"0", "1", "2", "3"};
  comp.pmf = {0.1, 0.2, 0.3, 0.4};
  comp.private_map = {0, 1, 0, 1};
  comp.alphabet_s = {"even", "odd"};
  model.components = {comp};
  SplitMix64 rng(11);
  const Channel ch = random_channel(rng, comp.alphabet_x, 3);

  const auto u = build_U(model, ch);
  REQUIRE(u.size() == 1);
  CHECK(u[0].out_alphabet == ch.out_alphabet);  // U_1 ranges over Y

  // Leakage through U equals leakage through Y exactly.
  const ComponentMetrics mu = evaluate_component(comp, u[0]);
  const ComponentMetrics my = evaluate_component(comp, ch);
  CHECK(mu.leakage_s_bits == doctest::Approx(my.leakage_s_bits).epsilon(1e-12).scale(1));
}

TEST_CASE("build_U with a constant channel leaks nothing") {
  SplitMix64 rng(13);
  const auto corpus = transform_corpus(500, 3);
  for (const auto& [model, ch] : corpus) {
    const Channel constant = Channel::constant(ch.in_alphabet);
    const auto u = build_U(model, constant);
    for (std::size_t i = 0; i < model.components.size(); ++i)
      CHECK(evaluate_component(model.components[i], u[i]).leakage_s_bits <= 1e-12);
  }
}

TEST_CASE("build_U telescopes to the joint leakage") {
  const auto corpus = transform_corpus(501, 10);
  for (const auto& [model, ch] : corpus) {
    const auto u = build_U(model, ch);
    double total = 0.0;
    for (std::size_t i = 0; i < model.components.size(); ++i)
      total += evaluate_component(model.components[i], u[i]).leakage_s_bits;
    const MechanismMetrics original = evaluate_mechanism(model, ch);
    CHECK(total == doctest::Approx(original.leakage_bits).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("privatization transform preserves the raw-release point") {
  const DataModel model = two_parity_components();
  const Alphabet joint_x = product_alphabet(model, all_indices(model));
  const ParallelizedMechanism mech =
      parallelize_privatization(model, Channel::identity(joint_x));
  CHECK(std::abs(mech.report.leakage_delta) <= 1e-9);
  for (double d : mech.report.utility_deltas) CHECK(d >= -1e-9);
  CHECK(mech.report.original.leakage_bits == doctest::Approx(2.0));  // H(S)
  CHECK(mech.report.transformed.utility_bits[1] >= 4.0 - 1e-9);      // H(C_2) kept
}

TEST_CASE("privatization transform on a constant channel") {
  const DataModel model = two_parity_components();
  const Alphabet joint_x = product_alphabet(model, all_indices(model));
  const ParallelizedMechanism mech =
      parallelize_privatization(model, Channel::constant(joint_x));
  CHECK(mech.report.transformed.leakage_bits <= 1e-9);
  for (double d : mech.report.utility_deltas) CHECK(d >= -1e-9);
}

TEST_CASE("privatization transform on seeded non-product channels") {
  const auto corpus = transform_corpus(502, 25);
  for (const auto& [model, ch] : corpus) {
    const ParallelizedMechanism mech = parallelize_privatization(model, ch);
    CHECK(std::abs(mech.report.leakage_delta) <= 1e-9);
    for (double d : mech.report.utility_deltas) CHECK(d >= -1e-9);
    CHECK(mech.report.product_form_ok);
  }
}

TEST_CASE("compression transform: N = 1 is the original channel") {
  DataModel model;
  ComponentModel comp;
  comp.alphabet_x = {"0", "1"};
  comp.pmf = {0.4, 0.6};
  comp.private_map = {0, 1};
  comp.alphabet_s = {"0", "1"};
  model.components = {comp};
  SplitMix64 rng(17);
  const Channel ch = random_channel(rng, comp.alphabet_x, 3);
  const ParallelizedMechanism mech = parallelize_compression(model, ch);
  CHECK(std::abs(mech.report.rate_delta) <= 1e-12);
  for (double d : mech.report.per_component_deltas) CHECK(std::abs(d) <= 1e-12);
}

TEST_CASE("compression transform: raw release stays exact") {
  const DataModel model = two_parity_components();
  const Alphabet joint_x = product_alphabet(model, all_indices(model));
  const ParallelizedMechanism mech =
      parallelize_compression(model, Channel::identity(joint_x));
  CHECK(std::abs(mech.report.rate_delta) <= 1e-9);
  for (double d : mech.report.utility_deltas) CHECK(std::abs(d) <= 1e-9);
}

TEST_CASE("compression transform on seeded channels meets all four relations") {
  const auto corpus = transform_corpus(503, 25);
  for (const auto& [model, ch] : corpus) {
    const ParallelizedMechanism mech = parallelize_compression(model, ch);
    CHECK(std::abs(mech.report.rate_delta) <= 1e-9);  // H(X|Y) preserved
    for (double d : mech.report.utility_deltas) CHECK(d >= -1e-9);
    for (double d : mech.report.per_component_deltas) CHECK(d >= -1e-9);
  }
}

TEST_CASE("per-component metrics agree with the assembled product on small instances") {
  // The constructed tuples are mutually independent across components, so the
  // decomposition must match a direct evaluation of the materialized product.
  std::size_t covered = 0;
  const auto corpus = transform_corpus(504, 12);
  for (const auto& [model, ch] : corpus) {
    for (const bool compression : {false, true}) {
      const ParallelizedMechanism mech =
          compression ? parallelize_compression(model, ch) : parallelize_privatization(model, ch);
      std::size_t product_size = 1;
      bool fits = true;
      for (const auto& c : mech.components) {
        product_size *= c.out_size();
        if (product_size > kProductCap) fits = false;
      }
      if (!fits || model.components.size() < 2) continue;
      ++covered;
      const MechanismMetrics direct = evaluate_mechanism(model, assemble_product(mech));
      CHECK(direct.leakage_bits ==
            doctest::Approx(mech.report.transformed.leakage_bits).epsilon(1e-9).scale(1));
      CHECK(direct.rate_bits ==
            doctest::Approx(mech.report.transformed.rate_bits).epsilon(1e-9).scale(1));
      for (std::size_t k = 0; k < direct.utility_bits.size(); ++k)
        CHECK(direct.utility_bits[k] ==
              doctest::Approx(mech.report.transformed.utility_bits[k]).epsilon(1e-9).scale(1));
    }
  }
  CHECK(covered > 0);
}

TEST_CASE("the X-prefix construction can leak strictly more") {
  // Two binary components; S_1 trivial, S_2 = X_2; Y = X_1 xor X_2.
  DataModel model;
  ComponentModel c1;
  c1.alphabet_x = {"0", "1"};
  c1.pmf = {0.5, 0.5};
  c1.private_map = {0, 0};
  c1.alphabet_s = {"s"};
  ComponentModel c2 = c1;
  c2.private_map = {0, 1};
  c2.alphabet_s = {"0", "1"};
  model.components = {c1, c2};
  TaskSpec t;
  t.components = {0, 1};
  t.gamma_bits = 0.0;
  model.tasks = {t};

  Channel xor_ch;
  xor_ch.in_alphabet = product_alphabet(model, {0, 1});
  xor_ch.out_alphabet = {"0", "1"};
  xor_ch.rows = {1, 0, 0, 1, 0, 1, 1, 0};

  const MechanismMetrics original = evaluate_mechanism(model, xor_ch);
  CHECK(original.leakage_bits <= 1e-12);  // X_2 independent of the parity

  const ParallelizedMechanism naive = parallelize_compression(model, xor_ch);
  CHECK(naive.report.transformed.leakage_bits >= 1.0 - 1e-9);  // X_2 = X_1 xor Y

  const ParallelizedMechanism sound = parallelize_privatization(model, xor_ch);
  CHECK(std::abs(sound.report.leakage_delta) <= 1e-9);
}

TEST_CASE("U alphabet blow-up raises an error") {
  DataModel model;
  for (int i = 0; i < 3; ++i) {
    ComponentModel comp;
    comp.alphabet_x = {"0", "1", "2", "3", "4", "5"};
    comp.pmf = Pmf(6, 1.0 / 6);
    comp.private_map = {0, 1, 2, 3, 4, 5};
    comp.alphabet_s = comp.alphabet_x;
    model.components.push_back(comp);
  }
  SplitMix64 rng(19);
  const Channel wide = random_channel(rng, product_alphabet(model, {0, 1, 2}), 120);
  CHECK_THROWS_AS(build_U(model, wide), std::invalid_argument);
}
