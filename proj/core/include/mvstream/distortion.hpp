#pragma once

#include <cstdint>
#include <vector>

#include "mvstream/catalog.hpp"

namespace mvstream {

/// A feasible download selection: at most one rate per view, views strictly
/// ascending. total_rate_kbps is the exact download cost including the
/// per-view depth overhead.
struct DownloadPlan {
  std::vector<Representation> items;
  int total_rate_kbps = 0;

  bool empty() const { return items.empty(); }
  int min_view() const { return items.front().view; }
  int max_view() const { return items.back().view; }
  std::size_t size() const { return items.size(); }

  friend bool operator==(const DownloadPlan&, const DownloadPlan&) = default;
};

/// Builds a plan from (view, rate) items; sorts by view, rejects duplicate
/// views, and computes the total cost with `depth_overhead_kbps` per item.
DownloadPlan make_plan(std::vector<Representation> items, int depth_overhead_kbps = 0);

/// Selects the rate-distortion parameters for the requested coding mode.
/// Throws ConfigError when joint parameters are requested but absent.
const RdParams& rd_params(const VideoProfile& profile, CodingMode mode);

/// Distortion of a coded camera view at the given texture bitrate,
/// clamped to [0, 1]. Out-of-range fitted values bump a global warning
/// counter before clamping; they indicate a misconfigured profile.
double coding_distortion(double rate_kbps, const RdParams& params);
double coding_distortion(double rate_kbps, const VideoProfile& profile,
                         CodingMode mode = CodingMode::independent);

std::uint64_t clamp_warning_count();
void reset_clamp_warnings();

/// Distortion of viewpoint `u` synthesized from two downloaded anchors with
/// left.view <= u <= right.view. The blend decays exponentially with the
/// distance from each anchor (rate xi per view unit) and falls back to the
/// inpainting floor for content neither anchor covers. A viewpoint that
/// coincides with a downloaded camera is decoded directly, no synthesis.
double synthesis_distortion(double u, const Representation& left, const Representation& right,
                            const VideoProfile& profile,
                            CodingMode mode = CodingMode::independent);

/// Degenerate synthesis from a single anchor (the far-side anchor term is
/// dropped); used when a viewpoint lies outside the span of the downloaded
/// views. `u` may sit on either side of the anchor.
double one_sided_distortion(double u, const Representation& anchor,
                            const VideoProfile& profile,
                            CodingMode mode = CodingMode::independent);

/// Mean distortion over every grid viewpoint in the window, each counted
/// exactly once: camera-coincident viewpoints decode directly, all others are
/// synthesized from the unique enclosing pair of consecutive plan views.
/// Requires the plan to span the window (min view <= U_L, max view >= U_R);
/// throws std::invalid_argument("window uncovered ...") otherwise.
double navigation_distortion(const DownloadPlan& plan, const NavigationWindow& window,
                             const VideoProfile& profile, const ViewpointGrid& grid,
                             CodingMode mode = CodingMode::independent);

/// Like navigation_distortion but tolerates plans that do not span the
/// window: viewpoints outside [min view, max view] are charged the one-sided
/// synthesis cost from the nearest downloaded view.
double navigation_distortion_partial(const DownloadPlan& plan, const NavigationWindow& window,
                                     const VideoProfile& profile, const ViewpointGrid& grid,
                                     CodingMode mode = CodingMode::independent);

}  // namespace mvstream
