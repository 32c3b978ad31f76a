#pragma once

#include <vector>

#include "mvstream/solver.hpp"

namespace mvstream {

struct GreedyResult {
  SolveResult result;
  /// Distortion reached at each accepted iteration, step 1 first.
  std::vector<double> step_distortions;
  int iterations = 0;
};

/// Iterative selection: start from the two lateral views enclosing the
/// window with an exhaustive rate-pair search, then repeatedly insert the
/// farthest unselected view inside each gap between consecutive selections,
/// give all insertions one shared rate, and pay for them by shaving the
/// previously selected rates down by the mean excess (snapped to available
/// rates). Stops when the distortion no longer improves or no view is left
/// to add.
GreedyResult solve_greedy(const Catalog& catalog, const VideoProfile& profile,
                          const NavigationWindow& window, double budget_kbps);

}  // namespace mvstream
