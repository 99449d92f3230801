#include <doctest.h>

#include <cmath>

#include "funnelkit/corpus.hpp"
#include "funnelkit/funnel.hpp"

using namespace funnelkit;

namespace {

ComponentModel parity_component() {
  ComponentModel comp;
  comp.alphabet_x = {"0", "1", "2", "3"};
  comp.pmf = {0.25, 0.25, 0.25, 0.25};
  comp.private_map = {0, 1, 0, 1};
  comp.alphabet_s = {"even", "odd"};
  return comp;
}

}  // namespace

TEST_CASE("threshold") {
  ComponentModel s_is_x;
  s_is_x.alphabet_x = {"0", "1"};
  s_is_x.pmf = {0.3, 0.7};
  s_is_x.private_map = {0, 1};
  s_is_x.alphabet_s = {"0", "1"};
  CHECK(threshold(s_is_x) == doctest::Approx(0.0).epsilon(1e-12).scale(1));

  ComponentModel s_const = s_is_x;
  s_const.private_map = {0, 0};
  s_const.alphabet_s = {"s"};
  CHECK(threshold(s_const) == doctest::Approx(s_const.entropy_x()));

  CHECK(threshold(parity_component()) == doctest::Approx(1.0));
}

TEST_CASE("funnel_leakage is the two-branch piecewise form") {
  CHECK(funnel_leakage(0.5, 1.0) == 0.0);
  CHECK(funnel_leakage(1.5, 1.0) == doctest::Approx(0.5));
  CHECK(funnel_leakage(1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(funnel_leakage(-0.1, 1.0), std::invalid_argument);

  // Non-decreasing and 1-Lipschitz in alpha.
  double prev = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double a = 0.1 * i;
    const double v = funnel_leakage(a, 1.7);
    CHECK(v >= prev - 1e-15);
    CHECK(v - prev <= 0.1 + 1e-15);
    prev = v;
  }
}

TEST_CASE("synthesize on the parity component") {
  const ComponentModel comp = parity_component();
  SUBCASE("alpha at the threshold is the leakage-free privatizer") {
    const ComponentSolution sol = synthesize(comp, 1.0);
    CHECK(!sol.mix_p.has_value());
    const ComponentMetrics m = evaluate_component(comp, sol.channel);
    CHECK(m.info_x_bits == doctest::Approx(1.0));
    CHECK(m.leakage_s_bits == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  }
  SUBCASE("alpha = 1.5 mixes at p = 0.5") {
    const ComponentSolution sol = synthesize(comp, 1.5);
    REQUIRE(sol.mix_p.has_value());
    CHECK(*sol.mix_p == doctest::Approx(0.5));
    CHECK(sol.leakage_bits == doctest::Approx(0.5));
    const ComponentMetrics m = evaluate_component(comp, sol.channel);
    CHECK(m.info_x_bits == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(m.leakage_s_bits == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("alpha = H(X) releases the raw symbol") {
    const ComponentSolution sol = synthesize(comp, 2.0);
    REQUIRE(sol.mix_p.has_value());
    CHECK(*sol.mix_p == doctest::Approx(0.0).epsilon(1e-12).scale(1));
    const ComponentMetrics m = evaluate_component(comp, sol.channel);
    CHECK(m.leakage_s_bits == doctest::Approx(comp.entropy_s()).epsilon(1e-9));
  }
  SUBCASE("alpha beyond H(X) is unachievable") {
    CHECK_THROWS_AS(synthesize(comp, 2.1), std::invalid_argument);
  }
  SUBCASE("below-threshold requests still return the zero-leakage channel") {
    const ComponentSolution sol = synthesize(comp, 0.25);
    CHECK(!sol.mix_p.has_value());
    const ComponentMetrics m = evaluate_component(comp, sol.channel);
    CHECK(m.info_x_bits >= 0.25 - 1e-9);
    CHECK(m.leakage_s_bits <= 1e-9);
  }
}

TEST_CASE("degenerate H(S) = 0 component") {
  ComponentModel comp;
  comp.alphabet_x = {"0", "1"};
  comp.pmf = {0.5, 0.5};
  comp.private_map = {0, 0};
  comp.alphabet_s = {"s"};
  const ComponentSolution sol = synthesize(comp, comp.entropy_x());
  CHECK(!sol.mix_p.has_value());
  const ComponentMetrics m = evaluate_component(comp, sol.channel);
  CHECK(m.info_x_bits == doctest::Approx(1.0));
  CHECK(m.leakage_s_bits == doctest::Approx(0.0).epsilon(1e-12).scale(1));
}

TEST_CASE("achievability across seeded components and released amounts") {
  const auto comps = funnel_corpus(2025, 20);
  for (const auto& comp : comps) {
    const double h = comp.entropy_x();
    const double tau = threshold(comp);
    for (double frac : {0.0, 0.3, 0.6, 1.0}) {
      const double alpha = frac * h;
      const ComponentSolution sol = synthesize(comp, alpha);
      const ComponentMetrics m = evaluate_component(comp, sol.channel);
      CHECK(m.info_x_bits >= alpha - 1e-9);
      CHECK(m.leakage_s_bits ==
            doctest::Approx(funnel_leakage(alpha, tau)).epsilon(1e-9).scale(1));
    }
  }
}
