#include "mvstream/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvstream {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  DownloadPlan plan;
  double distortion = kInf;
  bool valid = false;
};

void consider(Candidate& best, DownloadPlan plan, double distortion) {
  if (!best.valid || distortion < best.distortion ||
      (distortion == best.distortion && plan_tie_better(plan, best.plan))) {
    best = {std::move(plan), distortion, true};
  }
}

SolveResult sentinel(const Catalog& catalog, const NavigationWindow& window) {
  SolveResult r;
  auto cheapest = cheapest_covering_cost(catalog, window);
  r.cheapest_covering_kbps = cheapest ? *cheapest : -1;
  return r;
}

SolveResult finish(Candidate&& best, const Catalog& catalog, const NavigationWindow& window) {
  if (!best.valid) return sentinel(catalog, window);
  SolveResult r;
  r.distortion = best.distortion;
  r.plan = std::move(best.plan);
  return r;
}

}  // namespace

JointSegmentCatalog build_joint_segments(const Catalog& catalog) {
  JointSegmentCatalog out;
  const auto& views = catalog.views();
  for (std::size_t i = 0; i < views.size(); i += 2) {
    JointSegment segment;
    segment.views.push_back(views[i]);
    segment.per_view_rates_kbps = catalog.rates(views[i]);
    if (i + 1 < views.size()) {
      segment.views.push_back(views[i + 1]);
      std::vector<int> merged;
      const auto& other = catalog.rates(views[i + 1]);
      std::set_intersection(segment.per_view_rates_kbps.begin(),
                            segment.per_view_rates_kbps.end(), other.begin(), other.end(),
                            std::back_inserter(merged));
      segment.per_view_rates_kbps = std::move(merged);
    }
    out.segments.push_back(std::move(segment));
  }
  return out;
}

SolveResult view_adaptation(const Catalog& catalog, const VideoProfile& profile,
                            const NavigationWindow& window, double budget_kbps) {
  rd_params(profile, CodingMode::joint_paired);  // fail fast without joint parameters
  const ViewpointGrid& grid = catalog.grid();
  const int overhead = catalog.depth_rate_overhead_kbps();
  const JointSegmentCatalog joint = build_joint_segments(catalog);
  const int num_segments = static_cast<int>(joint.segments.size());
  if (num_segments > 20) {
    throw std::length_error("too many joint segments for exhaustive subset search");
  }

  // Shared rate ladder across segments: a selected rate must exist on every
  // selected camera, so candidate rates come per subset from the
  // intersection of the chosen segments' ladders.
  Candidate best;
  for (unsigned mask = 1; mask < (1u << num_segments); ++mask) {
    std::vector<int> views;
    std::vector<int> shared;
    bool first = true;
    for (int s = 0; s < num_segments; ++s) {
      if (!(mask >> s & 1)) continue;
      const JointSegment& segment = joint.segments[s];
      views.insert(views.end(), segment.views.begin(), segment.views.end());
      if (first) {
        shared = segment.per_view_rates_kbps;
        first = false;
      } else {
        std::vector<int> merged;
        std::set_intersection(shared.begin(), shared.end(),
                              segment.per_view_rates_kbps.begin(),
                              segment.per_view_rates_kbps.end(), std::back_inserter(merged));
        shared = std::move(merged);
      }
    }
    if (grid.camera_index(views.front()) > window.left_index ||
        grid.camera_index(views.back()) < window.right_index) {
      continue;  // subset does not cover the window
    }
    for (int rate : shared) {
      const double total =
          static_cast<double>(views.size()) * (rate + overhead);
      if (total > budget_kbps + 1e-9) break;
      std::vector<Representation> items;
      items.reserve(views.size());
      for (int v : views) items.push_back({v, rate});
      DownloadPlan plan = make_plan(std::move(items), overhead);
      const double d =
          navigation_distortion(plan, window, profile, grid, CodingMode::joint_paired);
      consider(best, std::move(plan), d);
    }
  }
  return finish(std::move(best), catalog, window);
}

SolveResult rate_adaptation(const Catalog& catalog, const VideoProfile& profile,
                            double predicted_view, const NavigationWindow& window,
                            double budget_kbps) {
  const ViewpointGrid& grid = catalog.grid();
  const int overhead = catalog.depth_rate_overhead_kbps();
  const auto& views = catalog.views();
  if (views.size() < 2) return sentinel(catalog, window);

  // Enclosing pair: last view at or left of the prediction and the next one
  // right of it; at the catalog edges the pair shifts inward.
  int left_pos = -1;
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (views[i] <= predicted_view + 1e-9) left_pos = static_cast<int>(i);
  }
  if (left_pos < 0) left_pos = 0;
  if (left_pos + 1 >= static_cast<int>(views.size())) {
    left_pos = static_cast<int>(views.size()) - 2;
  }
  std::vector<int> chosen{views[left_pos], views[left_pos + 1]};

  // Prefetch a third adjacent view when the window overshoots the pair span
  // by more than one grid step; the side with the larger overshoot wins,
  // ties go right.
  const int pair_left = grid.camera_index(chosen.front());
  const int pair_right = grid.camera_index(chosen.back());
  const int overshoot_left = std::max(0, pair_left - window.left_index);
  const int overshoot_right = std::max(0, window.right_index - pair_right);
  const int step = 1;  // one grid step
  if (overshoot_left > step || overshoot_right > step) {
    const bool go_right = overshoot_right >= overshoot_left;
    if (go_right && left_pos + 2 < static_cast<int>(views.size())) {
      chosen.push_back(views[left_pos + 2]);
    } else if (!go_right && left_pos - 1 >= 0) {
      chosen.insert(chosen.begin(), views[left_pos - 1]);
    }
  }

  // Exhaustive per-view rate search over the fixed 2-3 views.
  Candidate best;
  std::vector<std::size_t> digit(chosen.size(), 0);
  while (true) {
    std::vector<Representation> items;
    double total = 0.0;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      const int rate = catalog.rates(chosen[k])[digit[k]];
      items.push_back({chosen[k], rate});
      total += rate + overhead;
    }
    if (total <= budget_kbps + 1e-9) {
      DownloadPlan plan = make_plan(std::move(items), overhead);
      const double d = navigation_distortion_partial(plan, window, profile, grid);
      consider(best, std::move(plan), d);
    }
    std::size_t pos = 0;
    while (pos < chosen.size()) {
      if (++digit[pos] < catalog.rates(chosen[pos]).size()) break;
      digit[pos] = 0;
      ++pos;
    }
    if (pos == chosen.size()) break;
  }
  // No covering requirement here, so infeasibility only means that even the
  // cheapest rates for the fixed views exceed the budget.
  return finish(std::move(best), catalog, window);
}

SolveResult two_views_rate_adaptation(const Catalog& catalog, const VideoProfile& profile,
                                      const NavigationWindow& window, double budget_kbps) {
  const ViewpointGrid& grid = catalog.grid();
  const int overhead = catalog.depth_rate_overhead_kbps();
  int view_left = -1, view_right = -1;
  for (int v : catalog.views()) {
    const int idx = grid.camera_index(v);
    if (idx <= window.left_index) view_left = v;
    if (idx >= window.right_index && view_right < 0) view_right = v;
  }
  if (view_left < 0 || view_right < 0) return sentinel(catalog, window);

  Candidate best;
  if (view_left == view_right) {
    for (int r : catalog.rates(view_left)) {
      if (r + overhead > budget_kbps + 1e-9) break;
      DownloadPlan plan = make_plan({{view_left, r}}, overhead);
      const double d = navigation_distortion(plan, window, profile, grid);
      consider(best, std::move(plan), d);
    }
  } else {
    for (int rl : catalog.rates(view_left)) {
      for (int rr : catalog.rates(view_right)) {
        if (rl + rr + 2 * overhead > budget_kbps + 1e-9) break;
        DownloadPlan plan = make_plan({{view_left, rl}, {view_right, rr}}, overhead);
        const double d = navigation_distortion(plan, window, profile, grid);
        consider(best, std::move(plan), d);
      }
    }
  }
  return finish(std::move(best), catalog, window);
}

}  // namespace mvstream
