#pragma once

#include <optional>
#include <string>

#include "mvstream/distortion.hpp"

namespace mvstream {

/// Outcome of one representation-selection call. An absent plan means the
/// budget cannot buy any selection that the algorithm accepts; the recorded
/// distortion is then the sentinel value 1.
struct SolveResult {
  std::optional<DownloadPlan> plan;
  double distortion = 1.0;
  /// Cost of the cheapest window-spanning plan, filled on infeasibility;
  /// -1 when no spanning plan exists at any budget.
  int cheapest_covering_kbps = 0;

  bool feasible() const { return plan.has_value(); }
};

enum class Algo { optimal, greedy, view_adaptation, rate_adaptation, two_views };

Algo parse_algo(const std::string& name);      // "optimal" | "greedy" | "view" | "rate" | "2views"
std::string algo_name(Algo algo);

/// Cheapest download cost of any plan spanning the window (leftmost selected
/// view at or left of U_L, rightmost at or right of U_R), or nullopt when the
/// catalog cannot span it at all.
std::optional<int> cheapest_covering_cost(const Catalog& catalog,
                                          const NavigationWindow& window);

/// Deterministic plan ordering used by every solver to break distortion
/// ties: fewer views first, then lexicographically smaller view sets, then
/// lower total rate.
bool plan_tie_better(const DownloadPlan& candidate, const DownloadPlan& incumbent);

/// Dispatch to the configured algorithm. `predicted_view` feeds the
/// rate-adaptation baseline (defaults to the window center).
SolveResult solve_with(Algo algo, const Catalog& catalog, const VideoProfile& profile,
                       const NavigationWindow& window, double budget_kbps,
                       std::optional<double> predicted_view = std::nullopt);

}  // namespace mvstream
