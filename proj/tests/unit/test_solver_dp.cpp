#include <doctest.h>

#include <cmath>

#include "mvstream/environment.hpp"
#include "mvstream/instance_gen.hpp"
#include "mvstream/oracle.hpp"
#include "mvstream/solver_dp.hpp"

using namespace mvstream;

namespace {

const VideoProfile kDancer{"dancer", {0.98, 282.17, 469.13}, std::nullopt, 0.35, 0.35};

Catalog two_view_catalog() {
  return Catalog(ViewpointGrid(2, 0.5), {{1, {1000}}, {2, {1000}}});
}

Catalog three_view_catalog() {
  return Catalog(ViewpointGrid(3, 0.5), {{1, {500, 2000}}, {2, {500, 2000}}, {3, {500, 2000}}});
}

}  // namespace

TEST_CASE("unique feasible plan is returned verbatim") {
  const Catalog catalog = two_view_catalog();
  const NavigationWindow w = NavigationWindow::exact(catalog.grid(), 1.0, 2.0);
  const SolveResult r = solve_optimal(catalog, kDancer, w, 2000.0);
  REQUIRE(r.feasible());
  CHECK(r.plan->items == std::vector<Representation>{{1, 1000}, {2, 1000}});
  CHECK(r.plan->total_rate_kbps == 2000);
}

TEST_CASE("three-view instance matches the exhaustive optimum") {
  const Catalog catalog = three_view_catalog();
  const NavigationWindow w = NavigationWindow::exact(catalog.grid(), 1.0, 3.0);
  const SolveResult dp = solve_optimal(catalog, kDancer, w, 4000.0);
  const OracleResult oracle = solve_exhaustive(catalog, kDancer, w, 4000.0);
  REQUIRE(dp.feasible());
  REQUIRE(oracle.best.feasible());
  CHECK(std::abs(dp.distortion - oracle.best.distortion) <= 1e-9);
  CHECK(dp.plan->items == oracle.best.plan->items);
}

TEST_CASE("randomized corpus: DP equals the exhaustive constrained minimum") {
  auto rng = make_rng(101);
  int feasible = 0;
  for (int k = 0; k < 120; ++k) {
    const RandomInstance inst = random_small_instance(rng);
    const SolveResult dp = solve_optimal(inst.catalog, inst.profile, inst.window,
                                         inst.budget_kbps);
    const OracleResult oracle =
        solve_exhaustive(inst.catalog, inst.profile, inst.window, inst.budget_kbps);
    REQUIRE(dp.feasible() == oracle.best.feasible());
    if (dp.feasible()) {
      ++feasible;
      CHECK(std::abs(dp.distortion - oracle.best.distortion) <= 1e-9);
    }
  }
  CHECK(feasible > 20);  // the corpus must exercise the feasible path
}

TEST_CASE("returned plans respect budget and coverage") {
  auto rng = make_rng(102);
  for (int k = 0; k < 150; ++k) {
    const RandomInstance inst = random_small_instance(rng);
    const SolveResult r =
        solve_optimal(inst.catalog, inst.profile, inst.window, inst.budget_kbps);
    if (!r.feasible()) continue;
    CHECK(static_cast<double>(r.plan->total_rate_kbps) <= inst.budget_kbps + 1e-9);
    const auto& grid = inst.catalog.grid();
    CHECK(grid.camera_index(r.plan->min_view()) <= inst.window.left_index);
    CHECK(grid.camera_index(r.plan->max_view()) >= inst.window.right_index);
  }
}

TEST_CASE("distortion is non-increasing in budget") {
  auto rng = make_rng(103);
  for (int k = 0; k < 60; ++k) {
    const RandomInstance inst = random_small_instance(rng);
    double prev = 1.0 + 1e-9;
    for (double budget = 200.0; budget <= 4000.0; budget += 200.0) {
      const SolveResult r = solve_optimal(inst.catalog, inst.profile, inst.window, budget);
      const double d = r.feasible() ? r.distortion : 1.0;
      CHECK(d <= prev + 1e-12);
      prev = d;
    }
  }
}

TEST_CASE("infeasible result carries the cheapest covering cost") {
  const Catalog catalog = two_view_catalog();
  const NavigationWindow w = NavigationWindow::exact(catalog.grid(), 1.0, 2.0);
  const SolveResult r = solve_optimal(catalog, kDancer, w, 500.0);
  CHECK_FALSE(r.feasible());
  CHECK(r.distortion == 1.0);
  CHECK(r.cheapest_covering_kbps == 2000);
}

TEST_CASE("window left of every stored view is structurally uncoverable") {
  Catalog catalog(ViewpointGrid(4, 0.5), {{3, {100}}, {4, {100}}});
  const NavigationWindow w = NavigationWindow::exact(catalog.grid(), 1.0, 3.5);
  const SolveResult r = solve_optimal(catalog, kDancer, w, 1e9);
  CHECK_FALSE(r.feasible());
  CHECK(r.cheapest_covering_kbps == -1);
}

TEST_CASE("ties break toward fewer views, then smaller view sets") {
  // Flat fit (b = 0): every rate yields distortion 0, so all covering plans
  // tie and the tie order must decide.
  VideoProfile flat{"flat", {1.0, 0.0, 100.0}, std::nullopt, 0.5, 0.0};
  Catalog catalog(ViewpointGrid(3, 1.0), {{1, {100, 200}}, {2, {100}}, {3, {100, 200}}});
  const NavigationWindow w = NavigationWindow::exact(catalog.grid(), 1.0, 3.0);
  const SolveResult r = solve_optimal(catalog, flat, w, 10000.0);
  REQUIRE(r.feasible());
  // {1, 3} beats any three-view plan, and the 100 kbps rates beat 200.
  CHECK(r.plan->items == std::vector<Representation>{{1, 100}, {3, 100}});
}

TEST_CASE("repeat solves are bit-identical") {
  auto rng = make_rng(104);
  for (int k = 0; k < 40; ++k) {
    const RandomInstance inst = random_small_instance(rng);
    const SolveResult a =
        solve_optimal(inst.catalog, inst.profile, inst.window, inst.budget_kbps);
    const SolveResult b =
        solve_optimal(inst.catalog, inst.profile, inst.window, inst.budget_kbps);
    CHECK(a.feasible() == b.feasible());
    if (a.feasible()) {
      CHECK(a.plan->items == b.plan->items);
      CHECK(a.distortion == b.distortion);
    }
  }
}

TEST_CASE("single-rate ladders reduce to pure view selection") {
  Catalog catalog(ViewpointGrid(4, 0.5),
                  {{1, {500}}, {2, {500}}, {3, {500}}, {4, {500}}});
  const NavigationWindow w = NavigationWindow::exact(catalog.grid(), 1.0, 4.0);
  const SolveResult r = solve_optimal(catalog, kDancer, w, 1200.0);
  REQUIRE(r.feasible());
  CHECK(r.plan->size() == 2);  // only {1, 4} fits 1200 kbps
  CHECK(r.plan->min_view() == 1);
  CHECK(r.plan->max_view() == 4);
}

TEST_CASE("effectively infinite budgets are capped to the maximal spend") {
  const CatalogBundle l1 = [] {
    std::map<int, std::vector<int>> ladders;
    for (int v = 1; v <= 10; ++v)
      ladders[v] = {100, 200, 300, 500, 1000, 2000, 3000, 4000, 6000, 8000,
                    10000, 12000, 15000, 18000, 20000};
    return CatalogBundle{"L1", Catalog(ViewpointGrid(10, 0.1), ladders), {}, ""};
  }();
  const NavigationWindow w = NavigationWindow::exact(l1.catalog.grid(), 1.5, 9.5);
  const SolveResult huge = solve_optimal(l1.catalog, kDancer, w, 1e12);
  const SolveResult exact_cap = solve_optimal(l1.catalog, kDancer, w, 10 * 20000.0);
  REQUIRE(huge.feasible());
  CHECK(huge.plan->items == exact_cap.plan->items);
  CHECK(huge.distortion == exact_cap.distortion);
}

TEST_CASE("depth overhead participates in budgets and the exhaustive check") {
  Catalog catalog(ViewpointGrid(3, 0.5),
                  {{1, {100, 400}}, {2, {100, 400}}, {3, {100, 400}}},
                  /*depth_rate_overhead_kbps=*/50);
  CHECK(catalog.rate_gcd() == 50);
  const NavigationWindow w = NavigationWindow::exact(catalog.grid(), 1.0, 3.0);
  for (double budget : {250.0, 300.0, 500.0, 900.0, 1350.0}) {
    const SolveResult dp = solve_optimal(catalog, kDancer, w, budget);
    const OracleResult oracle = solve_exhaustive(catalog, kDancer, w, budget);
    REQUIRE(dp.feasible() == oracle.best.feasible());
    if (dp.feasible()) {
      CHECK(std::abs(dp.distortion - oracle.best.distortion) <= 1e-9);
      // total cost includes 50 kbps of depth per selected view
      int texture = 0;
      for (const auto& item : dp.plan->items) texture += item.rate_kbps;
      CHECK(dp.plan->total_rate_kbps ==
            texture + 50 * static_cast<int>(dp.plan->size()));
      CHECK(static_cast<double>(dp.plan->total_rate_kbps) <= budget + 1e-9);
    }
  }
}

TEST_CASE("complexity probe: tiny instances are fast, work scales with the ladder") {
  const auto samples = complexity_probe({{2, 2}, {12, 8}, {12, 16}}, 5);
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].seconds < 1e-3);  // 2 views, 2 rates: trivially small table
  CHECK(samples[1].transitions > 0);
  // Doubling the ladder with everything else fixed lands in the loose
  // quadratic band, both in deterministic work and in wall time.
  const double work_ratio =
      static_cast<double>(samples[2].transitions) / samples[1].transitions;
  CHECK(work_ratio >= 2.0);
  CHECK(work_ratio <= 8.0);
  const double time_ratio = samples[2].seconds / samples[1].seconds;
  CHECK(time_ratio >= 2.0);
  CHECK(time_ratio <= 8.0);
}
