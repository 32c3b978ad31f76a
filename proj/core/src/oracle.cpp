#include "mvstream/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace mvstream {

OracleResult solve_exhaustive(const Catalog& catalog, const VideoProfile& profile,
                              const NavigationWindow& window, double budget_kbps,
                              const OracleOptions& options) {
  const auto& views = catalog.views();
  const int m = static_cast<int>(views.size());

  std::uint64_t combinations = 1;
  for (int v : views) {
    const std::uint64_t options_here = catalog.rates(v).size() + 1;
    if (combinations > options.max_combinations / options_here) {
      throw std::length_error("instance too large for exhaustive search");
    }
    combinations *= options_here;
  }

  OracleResult result;
  auto cheapest = cheapest_covering_cost(catalog, window);
  result.best.cheapest_covering_kbps = cheapest ? *cheapest : -1;

  // Odometer over per-view choices; 0 means the view is skipped, k selects
  // the view's k-th rate.
  std::vector<int> digits(m, 0);
  const int overhead = catalog.depth_rate_overhead_kbps();
  bool have_best = false;
  double best_distortion = 0.0;

  while (true) {
    ++result.enumerated;

    std::vector<Representation> items;
    for (int i = 0; i < m; ++i) {
      if (digits[i] > 0) items.push_back({views[i], catalog.rates(views[i])[digits[i] - 1]});
    }
    if (!items.empty()) {
      DownloadPlan plan = make_plan(std::move(items), overhead);
      const bool within =
          static_cast<double>(plan.total_rate_kbps) <= budget_kbps + 1e-9;
      const bool covers =
          catalog.grid().camera_index(plan.min_view()) <= window.left_index &&
          catalog.grid().camera_index(plan.max_view()) >= window.right_index;
      const bool admissible = within && (covers || !options.require_coverage);
      double distortion = 1.0;
      if (admissible) {
        distortion = covers
                         ? navigation_distortion(plan, window, profile, catalog.grid())
                         : navigation_distortion_partial(plan, window, profile, catalog.grid());
        ++result.admissible;
        if (!have_best || distortion < best_distortion ||
            (distortion == best_distortion && plan_tie_better(plan, *result.best.plan))) {
          have_best = true;
          best_distortion = distortion;
          result.best.plan = plan;
          result.best.distortion = distortion;
        }
      }
      if (options.collect_log) {
        result.log.push_back({std::move(plan), within, covers, distortion});
      }
    }

    int pos = m - 1;
    while (pos >= 0) {
      if (++digits[pos] <= static_cast<int>(catalog.rates(views[pos]).size())) break;
      digits[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }

  if (!have_best) {
    result.best.plan.reset();
    result.best.distortion = 1.0;
  }
  return result;
}

}  // namespace mvstream
