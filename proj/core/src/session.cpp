#include "mvstream/session.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mvstream/csv.hpp"

namespace mvstream {

std::string ChannelSpec::label() const {
  switch (kind) {
    case Kind::constant: return "const" + std::to_string(static_cast<int>(constant_kbps));
    case Kind::markov: {
      std::ostringstream out;
      out << "markov_pc" << activity;
      return out.str();
    }
    case Kind::trace: {
      const auto slash = trace_path.find_last_of('/');
      return "trace_" + trace_path.substr(slash == std::string::npos ? 0 : slash + 1);
    }
  }
  return "?";
}

namespace {

// Channel facade: per-segment bandwidth for ladder-style channels, real-time
// integration for traces.
class ChannelPlayer {
 public:
  ChannelPlayer(const ChannelSpec& spec, std::uint64_t seed) : spec_(spec) {
    if (spec.kind == ChannelSpec::Kind::markov) {
      markov_.emplace(spec.states_kbps.empty() ? MarkovChannel::default_states_kbps()
                                               : spec.states_kbps,
                      spec.activity, seed);
    } else if (spec.kind == ChannelSpec::Kind::trace) {
      trace_.emplace(BandwidthTrace::from_csv_file(spec.trace_path));
    }
  }

  /// Bandwidth governing segment n; advances ladder channels one step.
  double begin_segment(double wall_t) {
    switch (spec_.kind) {
      case ChannelSpec::Kind::constant: return spec_.constant_kbps;
      case ChannelSpec::Kind::markov: return static_cast<double>(markov_->step());
      case ChannelSpec::Kind::trace: return trace_->value_at(wall_t);
    }
    return 0.0;
  }

  /// Download time for `kbits` starting at wall_t under the bandwidth
  /// returned by the matching begin_segment call.
  double download_seconds(double kbits, double wall_t, double segment_kbps) const {
    if (kbits <= 0.0) return 0.0;
    if (spec_.kind == ChannelSpec::Kind::trace) {
      return trace_->download_seconds(kbits, wall_t);
    }
    return kbits / segment_kbps;
  }

 private:
  ChannelSpec spec_;
  std::optional<MarkovChannel> markov_;
  std::optional<BandwidthTrace> trace_;
};

}  // namespace

double target_inter_request_s(double kbits, double predicted_kbps, double kappa,
                              double buffer_s, double buffer_reference_s) {
  const double estimate = predicted_kbps > 0.0 ? kbits / predicted_kbps : 0.0;
  return std::max(0.0, estimate + kappa * (buffer_s - buffer_reference_s));
}

SessionRecord run_session(const SessionConfig& config, const Catalog& catalog,
                          const VideoProfile& profile, const ChannelSpec& channel,
                          const NavigationModel& navigation) {
  if (config.tau <= 0.0) throw ConfigError("session.tau: must be > 0");
  if (config.lookahead < 1) throw ConfigError("session.lookahead: must be >= 1");
  if (config.buffer_reference_s <= 0.0) {
    throw ConfigError("session.buffer_reference_s: must be > 0");
  }
  if (config.kappa < 0.0) throw ConfigError("session.kappa: must be >= 0");
  if (config.num_segments < 1) throw ConfigError("session.num_segments: must be >= 1");

  const ViewpointGrid& grid = catalog.grid();
  ChannelPlayer player(channel, config.channel_seed.value_or(split_seed(config.seed, 101)));
  NavigationWalker walker(navigation, grid,
                          config.navigation_seed.value_or(split_seed(config.seed, 202)));
  EwmaPredictor predictor(config.alpha_tcp, config.beta_tcp,
                          static_cast<double>(catalog.min_rate_overall()));
  const double lookahead_s = config.lookahead * config.tau;
  const int nav_steps = walker.steps_per_segment(config.tau);

  SessionRecord record;
  record.config = config;
  record.video = profile.name;
  record.segments.reserve(config.num_segments);

  double buffer = config.initial_buffer_s;
  double t_request = 0.0;
  double t_prev_arrival = 0.0;

  for (int n = 1; n <= config.num_segments; ++n) {
    SegmentRecord seg;
    seg.n = n;
    seg.displayed_view = walker.current_view();
    seg.window = config.fixed_window
                     ? *config.fixed_window
                     : window_for(walker.current_index(), navigation.rho, lookahead_s, grid);

    const double segment_kbps = player.begin_segment(t_request);
    seg.predicted_kbps = config.prediction == PredictionMode::exact
                             ? segment_kbps
                             : (predictor.observations() == 0 ? segment_kbps
                                                              : predictor.predict_next());

    const SolveResult solved = solve_with(config.algo, catalog, profile, seg.window,
                                          seg.predicted_kbps, seg.displayed_view);
    seg.sentinel = !solved.feasible();
    seg.distortion = solved.distortion;

    double kbits = 0.0;
    if (solved.feasible()) {
      seg.plan = *solved.plan;
      kbits = static_cast<double>(seg.plan.total_rate_kbps) * config.tau;
      seg.download_s = player.download_seconds(kbits, t_request, segment_kbps);
      seg.realized_kbps = seg.download_s > 0.0 ? kbits / seg.download_s : segment_kbps;
      predictor.observe(seg.realized_kbps);
    } else {
      seg.realized_kbps = segment_kbps;  // channel kept evolving; nothing moved
    }

    // Playback drains in wall-clock time between consecutive arrivals; the
    // stall is whatever the previous buffer could not absorb.
    const double buffer_before = buffer;
    const double t_arrival = t_request + seg.download_s;
    const double elapsed = t_arrival - t_prev_arrival;
    seg.stall_s = std::max(0.0, elapsed - buffer);
    buffer = std::max(0.0, buffer - elapsed) + config.tau;
    seg.buffer_s = buffer;
    t_prev_arrival = t_arrival;

    // The next request waits for the pacing target but never starts before
    // the current download ends.
    const double target = target_inter_request_s(kbits, seg.predicted_kbps, config.kappa,
                                                 buffer_before, config.buffer_reference_s);
    t_request += std::max(seg.download_s, target);

    walker.advance(nav_steps);
    record.segments.push_back(std::move(seg));
  }
  return record;
}

SessionSummary aggregate(std::span<const SessionRecord> records, double variation_beta) {
  if (records.empty()) throw std::invalid_argument("aggregate: no session records");
  SessionSummary out;
  out.variation_beta = variation_beta;

  std::vector<double> pooled;
  double dist_sum = 0.0, variation_sum = 0.0, buffer_sum = 0.0;
  for (const SessionRecord& record : records) {
    double prev = record.segments.empty() ? 0.0 : record.segments.front().distortion;
    for (const SegmentRecord& seg : record.segments) {
      pooled.push_back(seg.distortion);
      dist_sum += seg.distortion;
      variation_sum += seg.distortion + variation_beta * (seg.distortion - prev);
      prev = seg.distortion;
      buffer_sum += seg.buffer_s;
      if (seg.stall_s > 0.0) {
        ++out.rebuffer_count;
        out.rebuffer_seconds += seg.stall_s;
      }
      if (seg.sentinel) ++out.sentinel_count;
    }
  }
  out.segments = static_cast<int>(pooled.size());
  if (out.segments == 0) throw std::invalid_argument("aggregate: sessions hold no segments");
  std::sort(pooled.begin(), pooled.end());
  auto rank = [&](double p) {
    const std::size_t idx =
        static_cast<std::size_t>(std::ceil(p * pooled.size())) - 1;
    return pooled[std::min(idx, pooled.size() - 1)];
  };
  out.mean_distortion = dist_sum / out.segments;
  out.p50_distortion = rank(0.50);
  out.p95_distortion = rank(0.95);
  out.mean_variation = variation_sum / out.segments;
  out.mean_buffer_s = buffer_sum / out.segments;
  return out;
}

const char* const kSessionCsvHeader =
    "n,algo,views,rates_kbps,total_rate,pred_kbps,real_kbps,dl_time_s,buffer_s,distortion,"
    "sentinel";

std::string session_csv(const SessionRecord& record) {
  std::string out(kSessionCsvHeader);
  out += '\n';
  const std::string algo = algo_name(record.config.algo);
  for (const SegmentRecord& seg : record.segments) {
    out += csv::number(seg.n);
    out += ',';
    out += algo;
    out += ',';
    for (std::size_t i = 0; i < seg.plan.items.size(); ++i) {
      if (i) out += '|';
      out += std::to_string(seg.plan.items[i].view);
    }
    out += ',';
    for (std::size_t i = 0; i < seg.plan.items.size(); ++i) {
      if (i) out += '|';
      out += std::to_string(seg.plan.items[i].rate_kbps);
    }
    out += ',';
    out += csv::number(seg.plan.total_rate_kbps);
    out += ',';
    out += csv::number(seg.predicted_kbps);
    out += ',';
    out += csv::number(seg.realized_kbps);
    out += ',';
    out += csv::number(seg.download_s);
    out += ',';
    out += csv::number(seg.buffer_s);
    out += ',';
    out += csv::number(seg.distortion);
    out += ',';
    out += seg.sentinel ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace mvstream
