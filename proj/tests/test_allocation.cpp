#include <doctest.h>

#include <cmath>

#include "funnelkit/allocation.hpp"
#include "funnelkit/corpus.hpp"
#include "funnelkit/oracle.hpp"

using namespace funnelkit;

TEST_CASE("parity example: alpha = (1.5, 1.0), L* = 0.5") {
  const DataModel model = parity_model();
  const Allocation a = solve_allocation(model);
  REQUIRE(a.status == Allocation::Status::optimal);
  CHECK(a.alphas[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(a.alphas[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.total_leakage_bits == doctest::Approx(0.5).epsilon(1e-9));

  const VertexEnumerationResult v = enumerate_lp_vertices(model);
  REQUIRE(v.feasible);
  CHECK(v.objective == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("covering task below the total threshold is leakage-free") {
  DataModel model = parity_model();
  model.tasks.clear();
  TaskSpec t;
  t.components = {0, 1};
  t.gamma_bits = 1.5;  // < tau_0 + tau_1 = 2
  model.tasks = {t};
  const Allocation a = solve_allocation(model);
  REQUIRE(a.status == Allocation::Status::optimal);
  CHECK(a.total_leakage_bits == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  CHECK(a.alphas[0] == doctest::Approx(a.taus[0]).epsilon(1e-9));
  CHECK(a.alphas[1] == doctest::Approx(a.taus[1]).epsilon(1e-9));
}

TEST_CASE("disjoint tasks separate") {
  DataModel model = parity_model();
  model.tasks[0].components = {0};
  model.tasks[0].gamma_bits = 1.75;
  model.tasks[1].components = {1};
  model.tasks[1].gamma_bits = 0.5;
  const Allocation a = solve_allocation(model);
  REQUIRE(a.status == Allocation::Status::optimal);
  // L* = sum_k max(0, gamma_k - sum tau): (1.75 - 1) + 0.
  CHECK(a.total_leakage_bits == doctest::Approx(0.75).epsilon(1e-9));
  const VertexEnumerationResult v = enumerate_lp_vertices(model);
  CHECK(v.objective == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("infeasible targets are reported with the violated tasks") {
  DataModel model = parity_model();
  model.tasks[0].gamma_bits = 2.5;  // > H(X_0) = 2
  const Allocation a = solve_allocation(model);
  REQUIRE(a.status == Allocation::Status::infeasible);
  REQUIRE(a.violated_tasks.size() == 1);
  CHECK(a.violated_tasks[0] == 0);
  CHECK_FALSE(enumerate_lp_vertices(model).feasible);
}

TEST_CASE("tau-tight degenerate component pins its alpha") {
  DataModel model = parity_model();
  model.components[1].private_map = {0, 0, 0, 0};  // H(S_1) = 0, tau_1 = H(X_1)
  model.components[1].alphabet_s = {"s"};
  model.tasks[1].gamma_bits = 3.5;
  const Allocation a = solve_allocation(model);
  REQUIRE(a.status == Allocation::Status::optimal);
  CHECK(a.alphas[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(a.total_leakage_bits == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("lexicographic tie-break picks the least alpha") {
  DataModel model = parity_model();
  model.tasks.clear();
  TaskSpec t;
  t.components = {0, 1};
  t.gamma_bits = 2.5;  // any alpha with alpha0 + alpha1 = 2.5 is optimal
  model.tasks = {t};
  const Allocation a = solve_allocation(model);
  REQUIRE(a.status == Allocation::Status::optimal);
  CHECK(a.alphas[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.alphas[1] == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("solve_and_synthesize meets the LP value end to end") {
  SUBCASE("parity example") {
    const MechanismBundle b = solve_and_synthesize(parity_model());
    REQUIRE(b.product.has_value());
    CHECK(b.metrics.leakage_bits == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(b.metrics.utility_bits[0] >= 1.5 - 1e-9);
    CHECK(b.metrics.utility_bits[1] >= 2.5 - 1e-9);
  }
  SUBCASE("all-zero targets emit only leakage-free channels") {
    DataModel model = parity_model();
    for (auto& t : model.tasks) t.gamma_bits = 0.0;
    const MechanismBundle b = solve_and_synthesize(model);
    CHECK(b.metrics.leakage_bits <= 1e-9);
    for (const auto& sol : b.solutions) CHECK(!sol.mix_p.has_value());
  }
  SUBCASE("forced corner: gamma = sum H releases everything") {
    DataModel model = parity_model();
    model.tasks.clear();
    TaskSpec t;
    t.components = {0, 1};
    t.gamma_bits = 4.0;
    model.tasks = {t};
    const MechanismBundle b = solve_and_synthesize(model);
    CHECK(b.allocation.alphas[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(b.allocation.alphas[1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(b.metrics.leakage_bits == doctest::Approx(2.0).epsilon(1e-9));  // H(S)
  }
}

TEST_CASE("simplex matches vertex enumeration across the seeded corpus") {
  const auto models = lp_corpus(99, 30);
  for (const auto& model : models) {
    const Allocation a = solve_allocation(model);
    const VertexEnumerationResult v = enumerate_lp_vertices(model);
    REQUIRE((a.status == Allocation::Status::optimal) == v.feasible);
    if (v.feasible) CHECK(a.total_leakage_bits == doctest::Approx(v.objective).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("optimality sandwich: metrics = per-component leakages = LP value") {
  const auto models = lp_corpus(7, 20);
  for (const auto& model : models) {
    const Allocation a = solve_allocation(model);
    if (a.status != Allocation::Status::optimal) continue;
    const MechanismBundle b = solve_and_synthesize(model);
    double funnel_sum = 0.0;
    for (std::size_t i = 0; i < a.alphas.size(); ++i) {
      CHECK(a.alphas[i] >= a.taus[i] - 1e-9);
      CHECK(a.alphas[i] <= model.components[i].entropy_x() + 1e-9);
      funnel_sum += funnel_leakage(a.alphas[i], a.taus[i]);
    }
    CHECK(funnel_sum == doctest::Approx(a.total_leakage_bits).epsilon(1e-9).scale(1));
    CHECK(b.metrics.leakage_bits == doctest::Approx(a.total_leakage_bits).epsilon(1e-9).scale(1));
    for (std::size_t k = 0; k < model.tasks.size(); ++k)
      CHECK(b.metrics.utility_bits[k] >= model.tasks[k].gamma_bits - 1e-9);
  }
}
