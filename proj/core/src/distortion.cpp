#include "mvstream/distortion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

namespace mvstream {

namespace {

std::atomic<std::uint64_t> g_clamp_warnings{0};

constexpr double kViewTolerance = 1e-9;

bool at_camera(double u, int view) { return std::abs(u - view) <= kViewTolerance; }

}  // namespace

DownloadPlan make_plan(std::vector<Representation> items, int depth_overhead_kbps) {
  std::sort(items.begin(), items.end(),
            [](const Representation& a, const Representation& b) { return a.view < b.view; });
  int total = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0 && items[i].view == items[i - 1].view) {
      throw std::invalid_argument("plan holds two rates for view " +
                                  std::to_string(items[i].view));
    }
    total += items[i].rate_kbps + depth_overhead_kbps;
  }
  return DownloadPlan{std::move(items), total};
}

const RdParams& rd_params(const VideoProfile& profile, CodingMode mode) {
  if (mode == CodingMode::independent) return profile.independent;
  if (!profile.joint) {
    throw ConfigError("profile \"" + profile.name + "\" has no joint coding parameters");
  }
  return *profile.joint;
}

double coding_distortion(double rate_kbps, const RdParams& params) {
  double d = 1.0 - (params.a - params.b / (rate_kbps + params.e));
  if (d < 0.0 || d > 1.0) {
    g_clamp_warnings.fetch_add(1, std::memory_order_relaxed);
    d = std::clamp(d, 0.0, 1.0);
  }
  return d;
}

double coding_distortion(double rate_kbps, const VideoProfile& profile, CodingMode mode) {
  return coding_distortion(rate_kbps, rd_params(profile, mode));
}

std::uint64_t clamp_warning_count() { return g_clamp_warnings.load(std::memory_order_relaxed); }

void reset_clamp_warnings() { g_clamp_warnings.store(0, std::memory_order_relaxed); }

double synthesis_distortion(double u, const Representation& anchor_a,
                            const Representation& anchor_b, const VideoProfile& profile,
                            CodingMode mode) {
  // Argument order carries no meaning; only the (v_min, v_max) coding-quality
  // order enters the blend.
  const Representation& left = anchor_a.view <= anchor_b.view ? anchor_a : anchor_b;
  const Representation& right = anchor_a.view <= anchor_b.view ? anchor_b : anchor_a;
  if (u < left.view - kViewTolerance || u > right.view + kViewTolerance) {
    std::ostringstream msg;
    msg << "viewpoint " << u << " outside anchor span [" << left.view << ", " << right.view
        << "]";
    throw std::invalid_argument(msg.str());
  }
  const RdParams& params = rd_params(profile, mode);
  if (at_camera(u, left.view)) return coding_distortion(left.rate_kbps, params);
  if (at_camera(u, right.view)) return coding_distortion(right.rate_kbps, params);

  const double d_left = coding_distortion(left.rate_kbps, params);
  const double d_right = coding_distortion(right.rate_kbps, params);
  // The better-coded anchor dominates the blend; ties keep the left view.
  const bool left_is_min = d_left <= d_right;
  const double d_min = left_is_min ? d_left : d_right;
  const double d_max = left_is_min ? d_right : d_left;
  const int v_min = left_is_min ? left.view : right.view;
  const int v_max = left_is_min ? right.view : left.view;

  const double alpha = std::exp(-profile.xi * std::abs(u - v_min));
  const double beta = std::exp(-profile.xi * std::abs(u - v_max));
  return alpha * d_min + (1.0 - alpha) * beta * d_max +
         (1.0 - alpha - (1.0 - alpha) * beta) * profile.inpaint_distortion;
}

double one_sided_distortion(double u, const Representation& anchor,
                            const VideoProfile& profile, CodingMode mode) {
  const double d_anchor = coding_distortion(anchor.rate_kbps, rd_params(profile, mode));
  const double alpha = std::exp(-profile.xi * std::abs(u - anchor.view));
  const double beta = alpha;  // degenerate pair: both distances collapse onto the anchor
  return alpha * d_anchor + (1.0 - alpha - (1.0 - alpha) * beta) * profile.inpaint_distortion;
}

namespace {

// Shared core of the two navigation evaluators. Walks the window's grid
// viewpoints once, keeping a cursor into the plan's consecutive view pairs.
double navigation_mean(const DownloadPlan& plan, const NavigationWindow& window,
                       const VideoProfile& profile, const ViewpointGrid& grid, CodingMode mode,
                       bool allow_partial) {
  if (plan.empty()) throw std::invalid_argument("empty download plan");
  for (const Representation& item : plan.items) {
    if (!grid.valid_camera(item.view)) {
      throw std::invalid_argument("plan view " + std::to_string(item.view) + " out of grid");
    }
  }
  const int span_left = grid.camera_index(plan.min_view());
  const int span_right = grid.camera_index(plan.max_view());
  if (!allow_partial && (span_left > window.left_index || span_right < window.right_index)) {
    std::ostringstream msg;
    msg << "window uncovered: plan spans [" << plan.min_view() << ", " << plan.max_view()
        << "], window [" << window.u_left(grid) << ", " << window.u_right(grid) << "]";
    throw std::invalid_argument(msg.str());
  }

  const RdParams& params = rd_params(profile, mode);
  double sum = 0.0;
  std::size_t right_anchor = 0;  // first plan item whose view index >= current viewpoint
  for (int idx = window.left_index; idx <= window.right_index; ++idx) {
    const double u = grid.viewpoint(idx);
    while (right_anchor < plan.size() &&
           grid.camera_index(plan.items[right_anchor].view) < idx) {
      ++right_anchor;
    }
    if (right_anchor < plan.size() &&
        grid.camera_index(plan.items[right_anchor].view) == idx) {
      sum += coding_distortion(plan.items[right_anchor].rate_kbps, params);
    } else if (right_anchor == 0) {
      sum += one_sided_distortion(u, plan.items.front(), profile, mode);
    } else if (right_anchor == plan.size()) {
      sum += one_sided_distortion(u, plan.items.back(), profile, mode);
    } else {
      sum += synthesis_distortion(u, plan.items[right_anchor - 1], plan.items[right_anchor],
                                  profile, mode);
    }
  }
  return sum / window.num_viewpoints();
}

}  // namespace

double navigation_distortion(const DownloadPlan& plan, const NavigationWindow& window,
                             const VideoProfile& profile, const ViewpointGrid& grid,
                             CodingMode mode) {
  return navigation_mean(plan, window, profile, grid, mode, /*allow_partial=*/false);
}

double navigation_distortion_partial(const DownloadPlan& plan, const NavigationWindow& window,
                                     const VideoProfile& profile, const ViewpointGrid& grid,
                                     CodingMode mode) {
  return navigation_mean(plan, window, profile, grid, mode, /*allow_partial=*/true);
}

}  // namespace mvstream
