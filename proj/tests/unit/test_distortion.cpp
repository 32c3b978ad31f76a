#include <doctest.h>

#include <cmath>

#include "mvstream/distortion.hpp"
#include "mvstream/environment.hpp"
#include "mvstream/instance_gen.hpp"

using namespace mvstream;

namespace {

const VideoProfile kShark{"shark", {1.0, 745.90, 1192.10}, std::nullopt, 0.52, 0.35};
const VideoProfile kDancer{"dancer", {0.98, 282.17, 469.13}, std::nullopt, 0.35, 0.35};
const VideoProfile kHall{"hall", {0.98, 129.89, 544.39}, std::nullopt, 1.32, 0.35};

// Exact-value profile: D(r) = 1000 / (r + 500), so 9500 -> 0.1, 4500 -> 0.2.
VideoProfile exact_profile(double xi) { return {"exact", {1.0, 1000.0, 500.0}, std::nullopt, xi, 0.35}; }

}  // namespace

TEST_CASE("coding distortion matches direct evaluation of the fit") {
  // Expected values frozen from independent evaluation of
  // 1 - (a - b/(r+e)) at double precision.
  CHECK(coding_distortion(1000.0, kShark.independent) ==
        doctest::Approx(0.340267323571005).epsilon(1e-12));
  CHECK(coding_distortion(100.0, kHall.independent) ==
        doctest::Approx(0.22157047750585823).epsilon(1e-12));
}

TEST_CASE("coding distortion approaches 1 - a at high rate") {
  CHECK(coding_distortion(1e12, kShark.independent) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(coding_distortion(1e12, kDancer.independent) == doctest::Approx(0.02).epsilon(1e-9));
}

TEST_CASE("coding distortion strictly decreases in rate") {
  auto rng = make_rng(7);
  for (int k = 0; k < 100; ++k) {
    // Keep the fit inside [0, 1] over the tested range so clamping never
    // flattens it (mirrors the load-time profile validation).
    const double a = 0.9 + 0.1 * uniform01(rng);
    const double e = 100.0 + 1000.0 * uniform01(rng);
    RdParams p{a, 50.0 + uniform01(rng) * (0.9 * a * (100.0 + e) - 50.0), e};
    double prev = coding_distortion(100.0, p);
    for (double r = 200.0; r <= 3000.0; r += 100.0) {
      const double d = coding_distortion(r, p);
      CHECK(d < prev);
      prev = d;
    }
  }
}

TEST_CASE("out-of-range fits are clamped and counted") {
  reset_clamp_warnings();
  const RdParams bad{1.0, 5000.0, 100.0};  // D(100) = 25
  CHECK(coding_distortion(100.0, bad) == 1.0);
  CHECK(clamp_warning_count() == 1);
  reset_clamp_warnings();
}

TEST_CASE("synthesis blend: frozen two-anchor example") {
  // xi = 0.35, D_I = 0.35, anchors at views 1 and 3 with coding distortions
  // 0.1 and 0.2, synthesized viewpoint u = 2. Frozen from independent
  // evaluation of the blend with alpha = beta = exp(-0.35).
  const VideoProfile profile = exact_profile(0.35);
  const double d = synthesis_distortion(2.0, {1, 9500}, {3, 4500}, profile);
  CHECK(d == doctest::Approx(0.14261255968122605).epsilon(1e-12));
}

TEST_CASE("viewpoint on a downloaded camera decodes directly") {
  const VideoProfile profile = exact_profile(0.35);
  CHECK(synthesis_distortion(1.0, {1, 9500}, {3, 4500}, profile) == doctest::Approx(0.1));
  CHECK(synthesis_distortion(3.0, {1, 9500}, {3, 4500}, profile) == doctest::Approx(0.2));
  // Also when the coincident camera is the worse-coded anchor.
  CHECK(synthesis_distortion(1.0, {1, 4500}, {3, 9500}, profile) == doctest::Approx(0.2));
}

TEST_CASE("equal anchor and inpainting distortion collapse the blend") {
  // All three blend terms equal d0, so any convex combination returns d0.
  VideoProfile profile = exact_profile(0.8);
  profile.inpaint_distortion = 0.2;
  const double d = synthesis_distortion(1.75, {1, 4500}, {3, 4500}, profile);
  CHECK(d == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("synthesis blend is invariant under swapping the anchor arguments") {
  auto rng = make_rng(11);
  for (int k = 0; k < 200; ++k) {
    VideoProfile profile = exact_profile(0.3 + uniform01(rng));
    const Representation a{1, 1000 + static_cast<int>(uniform01(rng) * 9000)};
    const Representation b{4, 1000 + static_cast<int>(uniform01(rng) * 9000)};
    const double u = 1.0 + 3.0 * uniform01(rng);
    CHECK(synthesis_distortion(u, a, b, profile) == synthesis_distortion(u, b, a, profile));
  }
}

TEST_CASE("viewpoints outside the anchor span are rejected") {
  const VideoProfile profile = exact_profile(0.5);
  CHECK_THROWS_AS(synthesis_distortion(0.5, {1, 9500}, {3, 4500}, profile),
                  std::invalid_argument);
  CHECK_THROWS_AS(synthesis_distortion(3.5, {1, 9500}, {3, 4500}, profile),
                  std::invalid_argument);
}

TEST_CASE("blend ordering keys on coding quality, not position") {
  const VideoProfile profile = exact_profile(0.5);
  // Better anchor on the right: v_min must follow the distortion order.
  const double d_left_better = synthesis_distortion(2.0, {1, 9500}, {3, 4500}, profile);
  const double d_right_better = synthesis_distortion(2.0, {1, 4500}, {3, 9500}, profile);
  // u = 2 is equidistant, so both orderings give the same value.
  CHECK(d_left_better == doctest::Approx(d_right_better).epsilon(1e-12));
}

TEST_CASE("blend stays above the better anchor when inpainting is worst") {
  // In the intended regime (inpainting at least as bad as the anchors) the
  // blend can never beat the better-coded anchor, and touches it at u = v_min.
  auto rng = make_rng(17);
  for (int k = 0; k < 200; ++k) {
    VideoProfile profile = exact_profile(0.3 + uniform01(rng));
    profile.inpaint_distortion = 0.5;
    const Representation a{1, 4000 + static_cast<int>(uniform01(rng) * 6000)};
    const Representation b{5, 4000 + static_cast<int>(uniform01(rng) * 6000)};
    const double d_min = std::min(coding_distortion(a.rate_kbps, profile.independent),
                                  coding_distortion(b.rate_kbps, profile.independent));
    for (double u = 1.0; u <= 5.0; u += 0.25) {
      CHECK(synthesis_distortion(u, a, b, profile) >= d_min - 1e-12);
    }
  }
}

TEST_CASE("one-sided synthesis: frozen example and boundary behavior") {
  const VideoProfile profile = exact_profile(1.32);
  // Distance 1 from the anchor with D(anchor) = 0.1; frozen independent
  // evaluation with alpha = beta = exp(-1.32).
  CHECK(one_sided_distortion(2.0, {1, 9500}, profile) ==
        doctest::Approx(0.21469526316522494).epsilon(1e-12));
  CHECK(one_sided_distortion(1.0, {1, 9500}, profile) == doctest::Approx(0.1));

  // Far from a perfect anchor everything is inpainted.
  VideoProfile far = exact_profile(1.32);
  far.independent = {1.0, 1e-6, 1.0};  // D ~ 0 at any rate
  CHECK(one_sided_distortion(60.0, {1, 1000}, far) == doctest::Approx(0.35).epsilon(1e-6));
}

TEST_CASE("navigation distortion composes decode and synthesis charges") {
  ViewpointGrid grid(3, 1.0);
  const DownloadPlan plan = make_plan({{1, 1000}, {3, 1000}});
  const NavigationWindow w = NavigationWindow::exact(grid, 1.0, 3.0);
  // Frozen composition: (D(1000) + blend(2) + D(1000)) / 3 for the dancer fit.
  CHECK(navigation_distortion(plan, w, kDancer, grid) ==
        doctest::Approx(0.21607575228549133).epsilon(1e-12));
}

TEST_CASE("navigation distortion over a half-step grid") {
  ViewpointGrid grid(2, 0.5);
  const DownloadPlan plan = make_plan({{1, 9500}, {2, 9500}});
  const NavigationWindow w = NavigationWindow::exact(grid, 1.0, 2.0);
  const VideoProfile profile = exact_profile(0.7);
  const double mid = synthesis_distortion(1.5, {1, 9500}, {2, 9500}, profile);
  CHECK(navigation_distortion(plan, w, profile, grid) ==
        doctest::Approx((0.1 + mid + 0.1) / 3.0).epsilon(1e-12));
}

TEST_CASE("single-viewpoint window on a downloaded camera decodes") {
  ViewpointGrid grid(10, 0.1);
  const DownloadPlan plan = make_plan({{2, 9500}});
  const NavigationWindow w = NavigationWindow::exact(grid, 2.0, 2.0);
  CHECK(navigation_distortion(plan, w, exact_profile(0.5), grid) == doctest::Approx(0.1));
}

TEST_CASE("uncovered window is rejected, partial evaluator accepts it") {
  ViewpointGrid grid(10, 0.1);
  const DownloadPlan plan = make_plan({{4, 1000}, {6, 1000}});
  const NavigationWindow w = NavigationWindow::exact(grid, 3.0, 7.0);
  CHECK_THROWS_WITH_AS(navigation_distortion(plan, w, kHall, grid),
                       doctest::Contains("window uncovered"), std::invalid_argument);
  const double d = navigation_distortion_partial(plan, w, kHall, grid);
  CHECK(d > 0.0);
  CHECK(d <= 1.0);
}

TEST_CASE("duplicate plan views are rejected at construction") {
  CHECK_THROWS_AS(make_plan({{1, 100}, {1, 200}}), std::invalid_argument);
}

TEST_CASE("plan total includes the per-view depth overhead") {
  const DownloadPlan plan = make_plan({{1, 100}, {2, 300}}, 50);
  CHECK(plan.total_rate_kbps == 100 + 300 + 2 * 50);
}

TEST_CASE("all distortion values stay inside [0, 1] on random inputs") {
  auto rng = make_rng(13);
  for (int k = 0; k < 300; ++k) {
    const RandomInstance inst = random_small_instance(rng);
    const auto& views = inst.catalog.views();
    std::vector<Representation> items;
    for (int v : views) items.push_back({v, inst.catalog.rates(v).front()});
    const DownloadPlan plan = make_plan(items);
    const NavigationWindow all{0, inst.catalog.grid().max_index()};
    const double d =
        navigation_distortion_partial(plan, all, inst.profile, inst.catalog.grid());
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
}

TEST_CASE("adding a duplicate view at the same rate cannot change the mean") {
  // Set semantics: the plan is keyed by view, so re-adding is a no-op (and
  // anything else is rejected at construction).
  ViewpointGrid grid(5, 0.5);
  const DownloadPlan plan = make_plan({{1, 500}, {3, 500}, {5, 500}});
  const NavigationWindow w = NavigationWindow::exact(grid, 1.0, 5.0);
  const double base = navigation_distortion(plan, w, kDancer, grid);
  const DownloadPlan same = make_plan({{3, 500}, {1, 500}, {5, 500}});
  CHECK(navigation_distortion(same, w, kDancer, grid) == base);
}
