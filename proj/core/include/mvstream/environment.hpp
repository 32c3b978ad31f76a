#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mvstream/catalog.hpp"

namespace mvstream {

/// Deterministic per-process stream splitting: one master seed fans out into
/// independent, reproducible substreams (channel, navigation, sweep cells).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

/// The engine is pinned to std::mt19937_64 and this explicit 53-bit mapping,
/// so sample streams are identical across platforms and standard libraries.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);
double uniform01(std::mt19937_64& rng);

/// Random-walk bandwidth over a fixed ladder of states: with activity p the
/// chain leaves its state, splitting the move mass between adjacent states
/// (p/3 per side) and two-step jumps (p/6 per side); moves that would leave
/// the ladder fold back into staying put.
class MarkovChannel {
 public:
  static std::vector<int> default_states_kbps();  // 0.6 .. 10 Mbps ladder

  MarkovChannel(std::vector<int> states_kbps, double activity, std::uint64_t seed,
                int initial_state = -1);  // -1: middle of the ladder

  const std::vector<int>& states_kbps() const { return states_; }
  const std::vector<std::vector<double>>& transition_matrix() const { return matrix_; }
  double activity() const { return activity_; }

  int current_kbps() const { return states_[state_]; }
  int current_state() const { return state_; }
  /// Advance one segment and return the new bandwidth.
  int step();

 private:
  std::vector<int> states_;
  double activity_;
  std::vector<std::vector<double>> matrix_;
  std::mt19937_64 rng_;
  int state_;
};

/// Piecewise-constant throughput samples; values hold until the next sample
/// and the last value holds forever.
class BandwidthTrace {
 public:
  struct Point {
    double t_seconds = 0.0;
    double kbps = 0.0;
  };

  explicit BandwidthTrace(std::vector<Point> points);

  /// Parses `t_seconds,throughput_kbps` CSV (header required).
  static BandwidthTrace from_csv(const std::string& text);
  static BandwidthTrace from_csv_file(const std::string& path);
  std::string to_csv() const;

  const std::vector<Point>& points() const { return points_; }
  double value_at(double t) const;
  /// Seconds needed to move `kbits` starting at time `t_start`.
  double download_seconds(double kbits, double t_start) const;

 private:
  std::vector<Point> points_;
};

/// Two-stage EWMA throughput estimate: one smoothing stage tracks the level,
/// a second tracks the inter-sample drift, and the prediction is their sum.
/// Warm-up with fewer than two samples repeats the last observation.
class EwmaPredictor {
 public:
  EwmaPredictor(double alpha, double beta, double floor_kbps = 1.0);

  void observe(double throughput_kbps);
  /// Prediction for the upcoming segment; updates the recursive level/drift
  /// state. Requires at least one prior observation.
  double predict_next();

  int observations() const { return count_; }
  double drift_estimate() const { return drift_; }
  /// Committed recursive prediction state (pre-floor).
  double level_estimate() const { return level_; }
  /// First-stage (drift-free) output of the latest predict_next call.
  double last_smoothed_level() const { return smoothed_; }

 private:
  double alpha_;
  double beta_;
  double floor_kbps_;
  double prev_ = 0.0;       // most recent observation
  double prev2_ = 0.0;      // observation before that
  double level_ = 0.0;      // previous final prediction (recursion state)
  double smoothed_ = 0.0;
  double drift_ = 0.0;
  int count_ = 0;
};

enum class NavigationKind { fixed, uniform, nonuniform };

struct NavigationModel {
  NavigationKind kind = NavigationKind::fixed;
  double p_stay = 1.0;       // nonuniform stay probability; uniform uses 1/3
  double start_view = 1.0;   // must lie on the grid
  double rho = 0.25;         // max navigation speed, views per second
};

/// Seeded random walk on the viewpoint grid: one elementary move is one grid
/// step left/right or a stay, reflecting at the grid edges.
class NavigationWalker {
 public:
  NavigationWalker(const NavigationModel& model, const ViewpointGrid& grid,
                   std::uint64_t seed);

  int current_index() const { return index_; }
  double current_view() const { return grid_.viewpoint(index_); }

  int step();
  int advance(int steps);
  /// Moves per segment of length tau_seconds: floor(rho * tau / delta).
  int steps_per_segment(double tau_seconds) const;

 private:
  NavigationModel model_;
  const ViewpointGrid& grid_;
  std::mt19937_64 rng_;
  int index_;
};

/// Navigation window reachable from `u` within the lookahead: [u - rho*T,
/// u + rho*T] snapped outward to the grid and clipped to [1, |V|].
NavigationWindow window_for(int u_index, double rho, double lookahead_seconds,
                            const ViewpointGrid& grid);

}  // namespace mvstream
