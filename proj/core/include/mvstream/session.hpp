#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvstream/environment.hpp"
#include "mvstream/solver.hpp"

namespace mvstream {

enum class PredictionMode { exact, ewma };

struct ChannelSpec {
  enum class Kind { constant, markov, trace };
  Kind kind = Kind::constant;
  double constant_kbps = 5000.0;
  double activity = 0.5;                 // markov state-change probability
  std::vector<int> states_kbps;          // empty: default ladder
  std::string trace_path;                // trace kind only
  std::string label() const;
};

struct SessionConfig {
  double tau = 2.0;               // segment playback duration, seconds
  int lookahead = 1;              // segments between download and display
  double buffer_reference_s = 20.0;
  double kappa = 0.0;             // request pacing gain, s per buffered s
  double initial_buffer_s = 0.0;
  int num_segments = 50;
  Algo algo = Algo::optimal;
  PredictionMode prediction = PredictionMode::ewma;
  double alpha_tcp = 0.4;
  double beta_tcp = 0.4;
  std::uint64_t seed = 1;
  /// Independent stream overrides; when absent both derive from `seed`.
  std::optional<std::uint64_t> channel_seed;
  std::optional<std::uint64_t> navigation_seed;
  /// Pin every segment to this window instead of deriving one from the
  /// walker position and rho (static-window scenarios).
  std::optional<NavigationWindow> fixed_window;
};

struct SegmentRecord {
  int n = 0;                   // 1-based segment index
  DownloadPlan plan;           // empty when the segment was infeasible
  bool sentinel = false;       // no feasible plan: distortion pinned to 1
  double predicted_kbps = 0.0;
  double realized_kbps = 0.0;  // mean throughput seen by the download
  double download_s = 0.0;
  double buffer_s = 0.0;       // level right after this segment arrived
  double stall_s = 0.0;        // playback starvation before this arrival
  double distortion = 1.0;
  NavigationWindow window;
  double displayed_view = 0.0; // window center when the request was made
};

struct SessionRecord {
  SessionConfig config;
  std::string video;
  std::vector<SegmentRecord> segments;
};

/// Target time between consecutive requests: the estimated download time
/// plus a proportional buffer correction toward the reference level,
/// floored at zero.
double target_inter_request_s(double kbits, double predicted_kbps, double kappa,
                              double buffer_s, double buffer_reference_s);

/// Replays one full streaming session: per downloading opportunity the
/// throughput is predicted, the window is built around the last displayed
/// view, the configured algorithm picks a plan under the predicted budget,
/// the download is simulated against the channel, and the buffer and request
/// pacing are updated. Identical (config, channel, seeds) inputs reproduce
/// the record bit for bit.
SessionRecord run_session(const SessionConfig& config, const Catalog& catalog,
                          const VideoProfile& profile, const ChannelSpec& channel,
                          const NavigationModel& navigation);

struct SessionSummary {
  int segments = 0;
  double mean_distortion = 0.0;
  double p50_distortion = 0.0;
  double p95_distortion = 0.0;
  /// Mean of D_t + beta * (D_t - D_{t-1}) with D_0 = D_1 per session.
  double mean_variation = 0.0;
  double variation_beta = 1.0;
  int rebuffer_count = 0;
  double rebuffer_seconds = 0.0;
  double mean_buffer_s = 0.0;
  int sentinel_count = 0;
};

SessionSummary aggregate(std::span<const SessionRecord> records, double variation_beta = 1.0);

/// Per-segment CSV:
/// n,algo,views,rates_kbps,total_rate,pred_kbps,real_kbps,dl_time_s,buffer_s,distortion,sentinel
std::string session_csv(const SessionRecord& record);
extern const char* const kSessionCsvHeader;

}  // namespace mvstream
