#include <doctest.h>

#include <cmath>

#include "mvstream/baselines.hpp"
#include "mvstream/catalog.hpp"
#include "mvstream/environment.hpp"
#include "mvstream/instance_gen.hpp"
#include "mvstream/solver_dp.hpp"

using namespace mvstream;

namespace {

std::string data_path(const std::string& rel) { return std::string(MVSTREAM_DATA_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("joint segments pair consecutive stored cameras") {
  const CatalogBundle l1 = load_catalog_file(data_path("catalogs/L1.json"));
  const JointSegmentCatalog j1 = build_joint_segments(l1.catalog);
  REQUIRE(j1.segments.size() == 5);
  CHECK(j1.segments[0].views == std::vector<int>{1, 2});
  CHECK(j1.segments[4].views == std::vector<int>{9, 10});

  const CatalogBundle l2 = load_catalog_file(data_path("catalogs/L2.json"));
  const JointSegmentCatalog j2 = build_joint_segments(l2.catalog);
  REQUIRE(j2.segments.size() == 3);
  CHECK(j2.segments[0].views == std::vector<int>{1, 3});
  CHECK(j2.segments[1].views == std::vector<int>{5, 7});
  CHECK(j2.segments[2].views == std::vector<int>{10});  // leftover coded alone
}

TEST_CASE("window [5.5, 6.5] drags view 8 in through its pair") {
  const CatalogBundle l1 = load_catalog_file(data_path("catalogs/L1.json"));
  const NavigationWindow w = NavigationWindow::exact(l1.catalog.grid(), 5.5, 6.5);
  const SolveResult r = view_adaptation(l1.catalog, l1.profile("dancer"), w, 10000.0);
  REQUIRE(r.feasible());
  bool has7 = false, has8 = false;
  for (const auto& item : r.plan->items) {
    has7 |= item.view == 7;
    has8 |= item.view == 8;
  }
  CHECK(has7);
  CHECK(has8);  // pair (7,8) is indivisible
  // one shared rate across every selected view
  for (const auto& item : r.plan->items) {
    CHECK(item.rate_kbps == r.plan->items.front().rate_kbps);
  }
  // selected cameras come in whole pairs
  CHECK(r.plan->size() % 2 == 0);
}

TEST_CASE("joint baseline returns the sentinel when nothing fits") {
  const CatalogBundle l1 = load_catalog_file(data_path("catalogs/L1.json"));
  const NavigationWindow w = NavigationWindow::exact(l1.catalog.grid(), 5.5, 6.5);
  const SolveResult r = view_adaptation(l1.catalog, l1.profile("dancer"), w, 350.0);
  CHECK_FALSE(r.feasible());
  CHECK(r.distortion == 1.0);
}

TEST_CASE("joint baseline needs joint fit parameters") {
  const CatalogBundle l3 = load_catalog_file(data_path("catalogs/L3.json"));
  const NavigationWindow w = NavigationWindow::exact(l3.catalog.grid(), 5.0, 6.0);
  CHECK_THROWS_AS(view_adaptation(l3.catalog, l3.profile("dancer"), w, 10000.0), ConfigError);
}

TEST_CASE("pair-prefetch baseline downloads 2 views inside a pair, 3 when spilling") {
  const CatalogBundle l1 = load_catalog_file(data_path("catalogs/L1.json"));
  const VideoProfile& hall = l1.profile("hall");

  SUBCASE("window within one camera pair") {
    const NavigationWindow w = NavigationWindow::exact(l1.catalog.grid(), 5.0, 6.0);
    const SolveResult r = rate_adaptation(l1.catalog, hall, 5.5, w, 8000.0);
    REQUIRE(r.feasible());
    CHECK(r.plan->size() == 2);
    CHECK(r.plan->items[0].view == 5);
    CHECK(r.plan->items[1].view == 6);
  }
  SUBCASE("window spilling one view past the pair adds a prefetch") {
    const NavigationWindow w = NavigationWindow::exact(l1.catalog.grid(), 5.0, 7.0);
    const SolveResult r = rate_adaptation(l1.catalog, hall, 5.5, w, 8000.0);
    REQUIRE(r.feasible());
    CHECK(r.plan->size() == 3);
    CHECK(r.plan->max_view() == 7);
  }
  SUBCASE("never more than three views") {
    auto rng = make_rng(401);
    const NavigationWindow w = NavigationWindow::exact(l1.catalog.grid(), 1.5, 9.5);
    for (double pv : {2.0, 4.3, 5.5, 8.0, 9.9}) {
      const SolveResult r = rate_adaptation(l1.catalog, hall, pv, w, 12000.0);
      if (r.feasible()) CHECK(r.plan->size() <= 3);
    }
    (void)rng;
  }
}

TEST_CASE("uncovered viewpoints are charged one-sided synthesis") {
  const CatalogBundle l1 = load_catalog_file(data_path("catalogs/L1.json"));
  const VideoProfile& hall = l1.profile("hall");
  const ViewpointGrid& grid = l1.catalog.grid();
  const NavigationWindow w = NavigationWindow::exact(grid, 1.5, 9.5);
  const SolveResult r = rate_adaptation(l1.catalog, hall, 5.5, w, 12000.0);
  REQUIRE(r.feasible());
  // Recompute the reported distortion from the plan with the documented
  // partial-coverage convention; both must agree exactly.
  const double expected = navigation_distortion_partial(*r.plan, w, hall, grid);
  CHECK(r.distortion == expected);
  // The far edge of the window really is outside the covered span.
  CHECK(grid.camera_index(r.plan->min_view()) > w.left_index);
}

TEST_CASE("joint selections are whole pairs plus at most the leftover single") {
  const CatalogBundle l2 = load_catalog_file(data_path("catalogs/L2.json"));
  const VideoProfile& shark = l2.profile("shark");
  for (double wl : {1.0, 3.0, 5.0, 8.0}) {
    for (double budget : {2000.0, 8000.0, 30000.0}) {
      const NavigationWindow w =
          NavigationWindow::snapped(l2.catalog.grid(), wl, wl + 1.5);
      const SolveResult r = view_adaptation(l2.catalog, shark, w, budget);
      if (!r.feasible()) continue;
      // count views that belong to two-camera segments; 10 is the singleton
      int paired = 0;
      bool has_single = false;
      for (const auto& item : r.plan->items) {
        if (item.view == 10) has_single = true;
        else ++paired;
      }
      CHECK(paired % 2 == 0);
      (void)has_single;  // odd totals only ever come from the singleton
    }
  }
}

TEST_CASE("lateral-views baseline always selects exactly the two lateral views") {
  const CatalogBundle l1 = load_catalog_file(data_path("catalogs/L1.json"));
  const NavigationWindow w = NavigationWindow::exact(l1.catalog.grid(), 1.5, 9.5);
  const SolveResult r = two_views_rate_adaptation(l1.catalog, l1.profile("hall"), w, 10000.0);
  REQUIRE(r.feasible());
  REQUIRE(r.plan->size() == 2);
  CHECK(r.plan->items[0].view == 1);
  CHECK(r.plan->items[1].view == 10);
}

TEST_CASE("lateral-views baseline never beats the optimum") {
  auto rng = make_rng(402);
  for (int k = 0; k < 120; ++k) {
    const RandomInstance inst = random_small_instance(rng);
    const SolveResult two =
        two_views_rate_adaptation(inst.catalog, inst.profile, inst.window, inst.budget_kbps);
    const SolveResult dp =
        solve_optimal(inst.catalog, inst.profile, inst.window, inst.budget_kbps);
    if (two.feasible()) {
      REQUIRE(dp.feasible());
      CHECK(dp.distortion <= two.distortion + 1e-12);
    }
  }
}

TEST_CASE("lateral-views baseline equals the optimum when the pair is optimal") {
  // Two stored views: the optimum cannot use anything else.
  Catalog catalog(ViewpointGrid(2, 0.5), {{1, {100, 300, 1000}}, {2, {100, 300, 1000}}});
  const VideoProfile profile{"p", {0.98, 282.17, 469.13}, std::nullopt, 0.35, 0.35};
  const NavigationWindow w = NavigationWindow::exact(catalog.grid(), 1.0, 2.0);
  const SolveResult two = two_views_rate_adaptation(catalog, profile, w, 1300.0);
  const SolveResult dp = solve_optimal(catalog, profile, w, 1300.0);
  REQUIRE(two.feasible());
  REQUIRE(dp.feasible());
  CHECK(two.distortion == dp.distortion);
  CHECK(two.plan->items == dp.plan->items);
}

TEST_CASE("baseline plans respect the budget or return the sentinel") {
  auto rng = make_rng(403);
  const CatalogBundle l1 = load_catalog_file(data_path("catalogs/L1.json"));
  const NavigationWindow w = NavigationWindow::exact(l1.catalog.grid(), 2.5, 7.5);
  for (double budget : {100.0, 300.0, 900.0, 2500.0, 7300.0, 19000.0}) {
    for (int algo = 0; algo < 3; ++algo) {
      SolveResult r;
      if (algo == 0) {
        r = view_adaptation(l1.catalog, l1.profile("shark"), w, budget);
      } else if (algo == 1) {
        r = rate_adaptation(l1.catalog, l1.profile("shark"), 5.0, w, budget);
      } else {
        r = two_views_rate_adaptation(l1.catalog, l1.profile("shark"), w, budget);
      }
      if (r.feasible()) {
        CHECK(static_cast<double>(r.plan->total_rate_kbps) <= budget + 1e-9);
      } else {
        CHECK(r.distortion == 1.0);
      }
    }
  }
  (void)rng;
}
