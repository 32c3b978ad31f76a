#pragma once

#include <vector>

#include "mvstream/solver.hpp"

namespace mvstream {

/// Two-camera grouping used by the joint-coding baseline: consecutive stored
/// cameras are paired left to right; an odd camera count leaves one trailing
/// singleton coded alone. Every group shares one per-view rate ladder (the
/// intersection of its members' ladders).
struct JointSegment {
  std::vector<int> views;  // one or two camera ids
  std::vector<int> per_view_rates_kbps;
};

struct JointSegmentCatalog {
  std::vector<JointSegment> segments;
};

JointSegmentCatalog build_joint_segments(const Catalog& catalog);

/// Joint-coding baseline: picks the cheapest-distortion subset of two-camera
/// segments covering the window, with one shared per-view rate across every
/// selected camera. Scores with the joint-coding rate-distortion parameters.
/// Requires profile.joint.
SolveResult view_adaptation(const Catalog& catalog, const VideoProfile& profile,
                            const NavigationWindow& window, double budget_kbps);

/// Pair-prefetch baseline: downloads the camera pair enclosing the predicted
/// view, plus one adjacent view when the window overshoots the pair by more
/// than one grid step; rates are then optimized exhaustively. Window
/// viewpoints outside the downloaded span cost one-sided synthesis from the
/// nearest downloaded view.
SolveResult rate_adaptation(const Catalog& catalog, const VideoProfile& profile,
                            double predicted_view, const NavigationWindow& window,
                            double budget_kbps);

/// Lateral-views baseline: fixes the selection to the tightest catalog pair
/// enclosing the window and optimizes only the two rates.
SolveResult two_views_rate_adaptation(const Catalog& catalog, const VideoProfile& profile,
                                      const NavigationWindow& window, double budget_kbps);

}  // namespace mvstream
