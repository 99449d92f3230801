#include <doctest.h>

#include <algorithm>

#include "funnelkit/channel.hpp"
#include "funnelkit/corpus.hpp"
#include "funnelkit/rng.hpp"

using namespace funnelkit;

namespace {

Channel bsc(double crossover) {
  Channel ch;
  ch.in_alphabet = {"0", "1"};
  ch.out_alphabet = {"0", "1"};
  ch.rows = {1 - crossover, crossover, crossover, 1 - crossover};
  return ch;
}

}  // namespace

TEST_CASE("push_joint examples") {
  SUBCASE("identity on uniform input is diagonal") {
    const Channel id = Channel::identity({"a", "b", "c"});
    const JointTable j = push_joint({1.0 / 3, 1.0 / 3, 1.0 / 3}, id);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c)
        CHECK(j.at(r, c) == doctest::Approx(r == c ? 1.0 / 3 : 0.0));
  }
  SUBCASE("constant channel gives a rank-one joint") {
    const Channel k = Channel::constant({"a", "b"});
    const JointTable j = push_joint({0.3, 0.7}, k);
    CHECK(j.at(0, 0) == doctest::Approx(0.3));
    CHECK(j.at(1, 0) == doctest::Approx(0.7));
  }
  SUBCASE("skewed input through BSC(0.1)") {
    const JointTable j = push_joint({0.25, 0.75}, bsc(0.1));
    CHECK(j.at(0, 0) == doctest::Approx(0.225));
    CHECK(j.at(0, 1) == doctest::Approx(0.025));
    CHECK(j.at(1, 0) == doctest::Approx(0.075));
    CHECK(j.at(1, 1) == doctest::Approx(0.675));
  }
  SUBCASE("size mismatch throws") {
    CHECK_THROWS_AS(push_joint({1.0}, bsc(0.1)), std::invalid_argument);
  }
}

TEST_CASE("relabel_through aggregates rows") {
  const JointTable j = push_joint({0.25, 0.25, 0.25, 0.25},
                                  Channel::identity({"0", "1", "2", "3"}));
  SUBCASE("identity map leaves the joint unchanged") {
    const JointTable r = relabel_through({0, 1, 2, 3}, j.row_alphabet, j);
    CHECK(r.probs == j.probs);
  }
  SUBCASE("constant map collapses to the column marginal") {
    const JointTable r = relabel_through({0, 0, 0, 0}, {"s"}, j);
    const Pmf cols = j.col_marginal();
    for (std::size_t c = 0; c < 4; ++c) CHECK(r.at(0, c) == doctest::Approx(cols[c]));
  }
  SUBCASE("parity map sums matching pairs") {
    const JointTable r = relabel_through({0, 1, 0, 1}, {"even", "odd"}, j);
    CHECK(r.at(0, 0) == doctest::Approx(0.25));
    CHECK(r.at(0, 2) == doctest::Approx(0.25));
    CHECK(r.at(0, 1) == doctest::Approx(0.0));
    CHECK(r.at(1, 1) == doctest::Approx(0.25));
  }
}

TEST_CASE("product_channel") {
  SUBCASE("single channel passes through") {
    const Channel ch = bsc(0.2);
    const Channel p = product_channel({ch});
    CHECK(p.out_alphabet == ch.out_alphabet);
    CHECK(p.rows == ch.rows);
  }
  SUBCASE("two identities give the identity on the product") {
    const Channel id = Channel::identity({"0", "1"});
    const Channel p = product_channel({id, id});
    CHECK(p.in_size() == 4);
    for (std::size_t x = 0; x < 4; ++x)
      for (std::size_t y = 0; y < 4; ++y) CHECK(p.at(x, y) == doctest::Approx(x == y ? 1.0 : 0.0));
    CHECK(p.in_alphabet[1] == "(0,1)");
  }
  SUBCASE("BSC product corner entry") {
    const Channel p = product_channel({bsc(0.1), bsc(0.2)});
    CHECK(p.at(0, 0) == doctest::Approx(0.9 * 0.8));
    CHECK(p.at(3, 0) == doctest::Approx(0.1 * 0.2));
  }
  SUBCASE("cap guard") {
    const Channel big = Channel::identity(Alphabet(70, "x"));
    Channel fixed = big;
    for (std::size_t i = 0; i < 70; ++i) {
      fixed.in_alphabet[i] = "x" + std::to_string(i);
      fixed.out_alphabet[i] = "x" + std::to_string(i);
    }
    CHECK_THROWS_AS(product_channel({fixed, fixed}), std::invalid_argument);
  }
}

TEST_CASE("mixture_channel") {
  const Channel id = Channel::identity({"0", "1"});
  const Channel k = Channel::constant({"0", "1"});
  SUBCASE("p = 1 is channel a with relabeled outputs") {
    const Channel m = mixture_channel(id, k, 1.0);
    CHECK(m.out_alphabet == Alphabet{"a:0", "a:1", "b:const"});
    CHECK(m.at(0, 0) == doctest::Approx(1.0));
    CHECK(m.at(0, 2) == doctest::Approx(0.0));
  }
  SUBCASE("p = 0 is channel b with relabeled outputs") {
    const Channel m = mixture_channel(id, k, 0.0);
    CHECK(m.at(0, 2) == doctest::Approx(1.0));
    CHECK(m.at(1, 2) == doctest::Approx(1.0));
  }
  SUBCASE("even mixture of the uniform-output channel and a constant") {
    Channel uniform;
    uniform.in_alphabet = {"0", "1"};
    uniform.out_alphabet = {"0", "1"};
    uniform.rows = {0.5, 0.5, 0.5, 0.5};
    const Channel m = mixture_channel(uniform, k, 0.5);
    for (std::size_t x = 0; x < 2; ++x) {
      CHECK(m.at(x, 0) == doctest::Approx(0.25));
      CHECK(m.at(x, 1) == doctest::Approx(0.25));
      CHECK(m.at(x, 2) == doctest::Approx(0.5));
    }
  }
  SUBCASE("invalid arguments") {
    CHECK_THROWS_AS(mixture_channel(id, Channel::identity({"x"}), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(mixture_channel(id, k, 1.5), std::invalid_argument);
  }
}

TEST_CASE("evaluate_mechanism endpoint cases") {
  const DataModel model = parity_model();
  const Alphabet joint_x = product_alphabet(model, all_indices(model));
  SUBCASE("raw release") {
    const MechanismMetrics m = evaluate_mechanism(model, Channel::identity(joint_x));
    CHECK(m.leakage_bits == doctest::Approx(2.0));  // H(S)
    CHECK(m.rate_bits == doctest::Approx(4.0));     // H(X)
    CHECK(m.utility_bits[0] == doctest::Approx(2.0));
    CHECK(m.utility_bits[1] == doctest::Approx(4.0));
  }
  SUBCASE("constant release") {
    const MechanismMetrics m = evaluate_mechanism(model, Channel::constant(joint_x));
    CHECK(m.leakage_bits == doctest::Approx(0.0).epsilon(1e-12).scale(1));
    CHECK(m.rate_bits == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  }
  SUBCASE("alphabet mismatch") {
    CHECK_THROWS_AS(evaluate_mechanism(model, Channel::identity({"a", "b"})),
                    std::invalid_argument);
  }
}

TEST_CASE("product mechanisms decompose into per-component measures") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    SplitMix64 rng(derive_seed(42, 900 + i));
    const DataModel model = random_model(rng, 3, 3, 3, 27);
    std::vector<Channel> parts;
    std::vector<ComponentMetrics> per;
    for (const auto& comp : model.components) {
      parts.push_back(random_channel(rng, comp.alphabet_x, 2 + rng.next_below(2)));
      per.push_back(evaluate_component(comp, parts.back()));
    }
    const MechanismMetrics m = evaluate_mechanism(model, product_channel(parts));
    double leak = 0.0;
    for (const auto& p : per) leak += p.leakage_s_bits;
    CHECK(m.leakage_bits == doctest::Approx(leak).epsilon(1e-9));
    for (std::size_t k = 0; k < model.tasks.size(); ++k) {
      double util = 0.0;
      for (std::size_t c : model.tasks[k].components) util += per[c].info_x_bits;
      CHECK(m.utility_bits[k] == doctest::Approx(util).epsilon(1e-9));
    }
    CHECK(m.leakage_bits <= m.rate_bits + 1e-9);
  }
}

TEST_CASE("tagged mixture information is the branch-weighted average") {
  for (std::uint64_t i = 0; i < 10; ++i) {
    SplitMix64 rng(derive_seed(42, 1200 + i));
    const Alphabet in = {"0", "1", "2"};
    const Pmf px = random_pmf(rng, 3);
    const Channel a = random_channel(rng, in, 2 + rng.next_below(3));
    const Channel b = Channel::identity(in);
    const double p = rng.next_double();
    const Channel mix = mixture_channel(a, b, p);
    const double lhs = mutual_information(push_joint(px, mix));
    const double rhs = p * mutual_information(push_joint(px, a)) +
                       (1 - p) * mutual_information(push_joint(px, b));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("bijective output relabeling leaves metrics unchanged") {
  SplitMix64 rng(derive_seed(42, 1300));
  const DataModel model = parity_model();
  const Alphabet joint_x = product_alphabet(model, all_indices(model));
  const Channel ch = random_channel(rng, joint_x, 5);
  const MechanismMetrics before = evaluate_mechanism(model, ch);

  Channel permuted = ch;
  std::vector<std::size_t> perm{4, 2, 0, 1, 3};
  for (std::size_t y = 0; y < 5; ++y) permuted.out_alphabet[y] = ch.out_alphabet[perm[y]];
  for (std::size_t x = 0; x < ch.in_size(); ++x)
    for (std::size_t y = 0; y < 5; ++y) permuted.at(x, y) = ch.at(x, perm[y]);
  const MechanismMetrics after = evaluate_mechanism(model, permuted);
  CHECK(after.leakage_bits == doctest::Approx(before.leakage_bits).epsilon(1e-12));
  CHECK(after.rate_bits == doctest::Approx(before.rate_bits).epsilon(1e-12));
  for (std::size_t k = 0; k < before.utility_bits.size(); ++k)
    CHECK(after.utility_bits[k] == doctest::Approx(before.utility_bits[k]).epsilon(1e-12));
}
