#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvstream {

/// Thrown for malformed or inconsistent configuration input. The message
/// names the offending field and the constraint it violates.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Camera/viewpoint geometry. Viewpoints live on a regular grid with spacing
/// `delta` between camera 1 and camera |V|; every camera position is itself a
/// grid point. All position arithmetic runs on integer grid indices so that
/// equality tests and window bounds never depend on floating-point drift.
class ViewpointGrid {
 public:
  /// `delta` must satisfy 0 < delta <= 1 with 1/delta integral.
  ViewpointGrid(int num_cameras, double delta);

  int num_cameras() const { return num_cameras_; }
  int steps_per_view() const { return steps_per_view_; }
  double delta() const { return 1.0 / steps_per_view_; }

  /// Largest valid grid index; index 0 is camera 1.
  int max_index() const { return (num_cameras_ - 1) * steps_per_view_; }
  bool contains(int index) const { return index >= 0 && index <= max_index(); }

  double viewpoint(int index) const {
    return 1.0 + static_cast<double>(index) / steps_per_view_;
  }

  bool is_camera(int index) const { return index % steps_per_view_ == 0; }
  int camera_id(int index) const { return 1 + index / steps_per_view_; }
  int camera_index(int camera_id) const { return (camera_id - 1) * steps_per_view_; }
  bool valid_camera(int camera_id) const {
    return camera_id >= 1 && camera_id <= num_cameras_;
  }

  /// Index of an on-grid viewpoint; throws std::invalid_argument when `u`
  /// does not sit on the grid (within a small tolerance) or lies outside it.
  int index_of(double u) const;
  std::optional<int> try_index_of(double u) const;

  /// Snap an arbitrary position down/up to the nearest grid index, clamped
  /// to [0, max_index].
  int floor_index(double u) const;
  int ceil_index(double u) const;

 private:
  int num_cameras_;
  int steps_per_view_;
};

enum class CodingMode { independent, joint_paired };

/// One downloadable unit: a camera view with its texture encoding bitrate.
struct Representation {
  int view = 0;
  int rate_kbps = 0;

  friend bool operator==(const Representation&, const Representation&) = default;
};

/// Hyperbolic rate-distortion fit: D(r) = 1 - (a - b / (r + e)).
struct RdParams {
  double a = 1.0;
  double b = 1.0;    // kbps
  double e = 1.0;    // kbps
};

/// Per-sequence model parameters: rate-distortion fits for each coding mode
/// plus the view-synthesis decay and inpainting floor.
struct VideoProfile {
  std::string name;
  RdParams independent;
  std::optional<RdParams> joint;  // present only when joint coding data exists
  double xi = 1.0;                // synthesis decay per view unit
  double inpaint_distortion = 0.35;
};

/// The representation set stored at the server: per-view bitrate ladders on a
/// viewpoint grid. Immutable after construction; safe to share across
/// concurrent sessions.
class Catalog {
 public:
  Catalog(ViewpointGrid grid, std::map<int, std::vector<int>> per_view_rates,
          int depth_rate_overhead_kbps = 0,
          CodingMode coding_mode = CodingMode::independent);

  const ViewpointGrid& grid() const { return grid_; }

  /// Camera ids that have at least one rate, ascending.
  const std::vector<int>& views() const { return views_; }
  bool has_view(int camera_id) const;
  const std::vector<int>& rates(int camera_id) const;

  int depth_rate_overhead_kbps() const { return depth_overhead_kbps_; }
  CodingMode coding_mode() const { return coding_mode_; }

  std::size_t representation_count() const;
  int min_rate(int camera_id) const { return rates(camera_id).front(); }
  int max_rate(int camera_id) const { return rates(camera_id).back(); }
  int min_rate_overall() const;

  /// gcd over every rate in the catalog and the depth overhead (when
  /// nonzero); the exact quantization step for budget bookkeeping.
  int rate_gcd() const { return rate_gcd_; }

  /// Download cost of one representation, depth stream included.
  int item_cost_kbps(int rate_kbps) const { return rate_kbps + depth_overhead_kbps_; }

 private:
  ViewpointGrid grid_;
  std::map<int, std::vector<int>> per_view_rates_;
  std::vector<int> views_;
  int depth_overhead_kbps_;
  CodingMode coding_mode_;
  int rate_gcd_;
};

/// A catalog plus the fitted model parameters for every video it serves.
struct CatalogBundle {
  std::string name;
  Catalog catalog;
  std::map<std::string, VideoProfile> profiles;
  std::string note;  // free-form provenance note carried through serialization

  const VideoProfile& profile(const std::string& video) const;
};

/// Parse and validate a JSON catalog description. Rejects off-grid cameras,
/// duplicate rates, and profile parameters whose rate-distortion values leave
/// [0, 1] on any catalog rate.
CatalogBundle load_catalog(const std::string& config_text);
CatalogBundle load_catalog_file(const std::string& path);

/// Inverse of load_catalog: emits JSON that parses back to an identical
/// bundle.
std::string serialize_catalog(const CatalogBundle& bundle);

/// Inclusive navigation-window bounds as grid indices.
struct NavigationWindow {
  int left_index = 0;
  int right_index = 0;

  int width_steps() const { return right_index - left_index; }
  /// Number of grid viewpoints covered, endpoints included.
  int num_viewpoints() const { return width_steps() + 1; }

  double u_left(const ViewpointGrid& grid) const { return grid.viewpoint(left_index); }
  double u_right(const ViewpointGrid& grid) const { return grid.viewpoint(right_index); }

  /// Endpoints must already lie on the grid; throws otherwise.
  static NavigationWindow exact(const ViewpointGrid& grid, double u_left, double u_right);
  /// Snaps endpoints outward to the grid and clips to [1, |V|].
  static NavigationWindow snapped(const ViewpointGrid& grid, double u_left, double u_right);

  friend bool operator==(const NavigationWindow&, const NavigationWindow&) = default;
};

/// All grid viewpoints inside the window, endpoints inclusive, ascending.
std::vector<double> viewpoints_in(const NavigationWindow& window, const ViewpointGrid& grid);

}  // namespace mvstream
