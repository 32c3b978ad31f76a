#include "mvstream/solver_greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace mvstream {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest catalog rate <= target for this view; -1 when even the smallest
// rate exceeds the target.
int snap_down(const std::vector<int>& rates, double target) {
  int best = -1;
  for (int r : rates) {
    if (r <= target + 1e-9) best = r;
    else break;
  }
  return best;
}

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

}  // namespace

GreedyResult solve_greedy(const Catalog& catalog, const VideoProfile& profile,
                          const NavigationWindow& window, double budget_kbps) {
  GreedyResult out;
  const ViewpointGrid& grid = catalog.grid();
  const int overhead = catalog.depth_rate_overhead_kbps();

  auto report_infeasible = [&]() {
    auto cheapest = cheapest_covering_cost(catalog, window);
    out.result.cheapest_covering_kbps = cheapest ? *cheapest : -1;
    return out;
  };

  // Lateral views: tightest catalog pair enclosing the window.
  int view_left = -1, view_right = -1;
  for (int v : catalog.views()) {
    const int idx = grid.camera_index(v);
    if (idx <= window.left_index) view_left = v;
    if (idx >= window.right_index && view_right < 0) view_right = v;
  }
  if (view_left < 0 || view_right < 0) return report_infeasible();

  // Step 1: exhaustive rate search on the lateral views.
  Candidate current;
  if (view_left == view_right) {
    for (int r : catalog.rates(view_left)) {
      if (r + overhead > budget_kbps + 1e-9) break;
      DownloadPlan plan = make_plan({{view_left, r}}, overhead);
      const double d = navigation_distortion(plan, window, profile, grid);
      consider(current, std::move(plan), d);
    }
  } else {
    for (int rl : catalog.rates(view_left)) {
      for (int rr : catalog.rates(view_right)) {
        if (rl + rr + 2 * overhead > budget_kbps + 1e-9) break;
        DownloadPlan plan = make_plan({{view_left, rl}, {view_right, rr}}, overhead);
        const double d = navigation_distortion(plan, window, profile, grid);
        consider(current, std::move(plan), d);
      }
    }
  }
  if (!current.valid) return report_infeasible();
  out.step_distortions.push_back(current.distortion);

  while (true) {
    // Insert the farthest unselected catalog view inside every gap between
    // consecutive selections; distance to the nearest selected anchor is the
    // proxy for correlation (it decays with view distance).
    std::vector<int> insertions;
    const auto& items = current.plan.items;
    for (std::size_t k = 0; k + 1 < items.size(); ++k) {
      const int lo = items[k].view, hi = items[k + 1].view;
      int best_view = -1, best_dist = 0;
      for (int v : catalog.views()) {
        if (v <= lo) continue;
        if (v >= hi) break;
        const int dist = std::min(v - lo, hi - v);
        if (dist > best_dist) {
          best_dist = dist;
          best_view = v;
        }
      }
      if (best_view > 0) insertions.push_back(best_view);
    }
    if (insertions.empty()) break;  // nothing left to add inside the span

    // Shared-rate candidates: rates available on every inserted view.
    std::vector<int> shared = catalog.rates(insertions.front());
    for (std::size_t k = 1; k < insertions.size(); ++k) {
      const auto& rates = catalog.rates(insertions[k]);
      std::vector<int> merged;
      std::set_intersection(shared.begin(), shared.end(), rates.begin(), rates.end(),
                            std::back_inserter(merged));
      shared = std::move(merged);
    }

    Candidate next;
    for (int new_rate : shared) {
      // Mean-excess reduction of the previously selected rates, snapped to
      // available rates; saturated views drop out and the remainder is
      // redistributed over the rest.
      std::map<int, int> adjusted;
      double prior_cost = 0.0;
      for (const Representation& item : items) {
        adjusted[item.view] = item.rate_kbps;
        prior_cost += item.rate_kbps + overhead;
      }
      double need = prior_cost +
                    static_cast<double>(insertions.size()) * (new_rate + overhead) -
                    budget_kbps;
      bool ok = true;
      while (need > 1e-9) {
        std::vector<int> active;
        for (const auto& [view, rate] : adjusted) {
          if (rate > catalog.min_rate(view)) active.push_back(view);
        }
        if (active.empty()) {
          ok = false;
          break;
        }
        const double per_view = need / active.size();
        double reduced = 0.0;
        for (int view : active) {
          const int old_rate = adjusted[view];
          int snapped = snap_down(catalog.rates(view), old_rate - per_view);
          if (snapped < 0) snapped = catalog.min_rate(view);
          adjusted[view] = snapped;
          reduced += old_rate - snapped;
        }
        need -= reduced;
      }
      if (!ok) continue;

      std::vector<Representation> merged;
      for (const auto& [view, rate] : adjusted) merged.push_back({view, rate});
      for (int view : insertions) merged.push_back({view, new_rate});
      DownloadPlan plan = make_plan(std::move(merged), overhead);
      if (plan.total_rate_kbps > budget_kbps + 1e-9) continue;
      const double d = navigation_distortion(plan, window, profile, grid);
      consider(next, std::move(plan), d);
    }

    if (!next.valid) break;
    out.step_distortions.push_back(next.distortion);
    if (next.distortion >= current.distortion) break;  // no improvement: keep previous
    current = std::move(next);
    if (current.plan.size() == catalog.views().size()) break;  // every view selected
  }

  out.iterations = static_cast<int>(out.step_distortions.size());
  out.result.plan = current.plan;
  out.result.distortion = current.distortion;
  return out;
}

}  // namespace mvstream
