#include "mvstream/solver.hpp"

#include <limits>

#include "mvstream/baselines.hpp"
#include "mvstream/solver_dp.hpp"
#include "mvstream/solver_greedy.hpp"

namespace mvstream {

Algo parse_algo(const std::string& name) {
  if (name == "optimal") return Algo::optimal;
  if (name == "greedy") return Algo::greedy;
  if (name == "view") return Algo::view_adaptation;
  if (name == "rate") return Algo::rate_adaptation;
  if (name == "2views") return Algo::two_views;
  throw ConfigError("algo: unknown algorithm \"" + name +
                    "\" (expected optimal|greedy|view|rate|2views)");
}

std::string algo_name(Algo algo) {
  switch (algo) {
    case Algo::optimal: return "optimal";
    case Algo::greedy: return "greedy";
    case Algo::view_adaptation: return "view";
    case Algo::rate_adaptation: return "rate";
    case Algo::two_views: return "2views";
  }
  return "?";
}

std::optional<int> cheapest_covering_cost(const Catalog& catalog,
                                          const NavigationWindow& window) {
  const ViewpointGrid& grid = catalog.grid();
  const int overhead = catalog.depth_rate_overhead_kbps();
  int best = std::numeric_limits<int>::max();
  for (int left : catalog.views()) {
    if (grid.camera_index(left) > window.left_index) break;
    for (int right : catalog.views()) {
      if (right < left || grid.camera_index(right) < window.right_index) continue;
      const int cost = left == right
                           ? catalog.min_rate(left) + overhead
                           : catalog.min_rate(left) + catalog.min_rate(right) + 2 * overhead;
      best = std::min(best, cost);
    }
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

bool plan_tie_better(const DownloadPlan& candidate, const DownloadPlan& incumbent) {
  if (candidate.size() != incumbent.size()) return candidate.size() < incumbent.size();
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (candidate.items[i].view != incumbent.items[i].view) {
      return candidate.items[i].view < incumbent.items[i].view;
    }
  }
  return candidate.total_rate_kbps < incumbent.total_rate_kbps;
}

SolveResult solve_with(Algo algo, const Catalog& catalog, const VideoProfile& profile,
                       const NavigationWindow& window, double budget_kbps,
                       std::optional<double> predicted_view) {
  switch (algo) {
    case Algo::optimal:
      return solve_optimal(catalog, profile, window, budget_kbps);
    case Algo::greedy:
      return solve_greedy(catalog, profile, window, budget_kbps).result;
    case Algo::view_adaptation:
      return view_adaptation(catalog, profile, window, budget_kbps);
    case Algo::rate_adaptation: {
      const double center =
          predicted_view.value_or((window.u_left(catalog.grid()) +
                                   window.u_right(catalog.grid())) / 2.0);
      return rate_adaptation(catalog, profile, center, window, budget_kbps);
    }
    case Algo::two_views:
      return two_views_rate_adaptation(catalog, profile, window, budget_kbps);
  }
  throw std::logic_error("unhandled algo");
}

}  // namespace mvstream
