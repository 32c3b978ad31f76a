#include "mvstream/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mvstream {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over the (seed, stream) pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(split_seed(seed, stream));
}

double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa in [0, 1)
}

std::vector<int> MarkovChannel::default_states_kbps() {
  return {600, 1000, 2000, 3000, 4000, 5000, 6000, 8000, 10000};
}

MarkovChannel::MarkovChannel(std::vector<int> states_kbps, double activity, std::uint64_t seed,
                             int initial_state)
    : states_(std::move(states_kbps)), activity_(activity), rng_(make_rng(seed, 0)) {
  if (states_.empty()) throw ConfigError("channel.states: must not be empty");
  if (!std::is_sorted(states_.begin(), states_.end()) || states_.front() <= 0) {
    throw ConfigError("channel.states: must be positive and ascending");
  }
  if (activity_ < 0.0 || activity_ > 1.0) {
    throw ConfigError("channel.activity: must lie in [0, 1]");
  }
  const int n = static_cast<int>(states_.size());
  matrix_.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    double placed = 0.0;
    for (int d : {-2, -1, 1, 2}) {
      const int j = i + d;
      if (j < 0 || j >= n) continue;
      const double mass = std::abs(d) == 1 ? activity_ / 3.0 : activity_ / 6.0;
      matrix_[i][j] = mass;
      placed += mass;
    }
    matrix_[i][i] = 1.0 - placed;  // out-of-ladder mass folds into staying
  }
  state_ = initial_state >= 0 ? initial_state : n / 2;
  if (state_ >= n) throw ConfigError("channel.initial_state: outside the ladder");
}

int MarkovChannel::step() {
  const double u = uniform01(rng_);
  double acc = 0.0;
  const auto& row = matrix_[state_];
  for (std::size_t j = 0; j < row.size(); ++j) {
    acc += row[j];
    if (u < acc) {
      state_ = static_cast<int>(j);
      break;
    }
  }
  return states_[state_];
}

BandwidthTrace::BandwidthTrace(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw ConfigError("trace: must hold at least one sample");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].kbps <= 0.0) throw ConfigError("trace: throughput must be > 0");
    if (i > 0 && points_[i].t_seconds <= points_[i - 1].t_seconds) {
      throw ConfigError("trace: timestamps must be strictly increasing");
    }
  }
}

BandwidthTrace BandwidthTrace::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace: empty input");
  std::vector<Point> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("trace: malformed row: " + line);
    points.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return BandwidthTrace(std::move(points));
}

BandwidthTrace BandwidthTrace::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str());
}

std::string BandwidthTrace::to_csv() const {
  std::ostringstream out;
  out << "t_seconds,throughput_kbps\n";
  for (const Point& p : points_) out << p.t_seconds << ',' << p.kbps << '\n';
  return out.str();
}

double BandwidthTrace::value_at(double t) const {
  if (t <= points_.front().t_seconds) return points_.front().kbps;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (t < points_[i].t_seconds) return points_[i - 1].kbps;
  }
  return points_.back().kbps;
}

double BandwidthTrace::download_seconds(double kbits, double t_start) const {
  if (kbits <= 0.0) return 0.0;
  double t = t_start;
  double remaining = kbits;
  std::size_t i = 0;
  while (i + 1 < points_.size() && points_[i + 1].t_seconds <= t) ++i;
  while (i + 1 < points_.size()) {
    const double span = points_[i + 1].t_seconds - t;
    const double can_move = points_[i].kbps * span;
    if (can_move >= remaining) return (t - t_start) + remaining / points_[i].kbps;
    remaining -= can_move;
    t = points_[i + 1].t_seconds;
    ++i;
  }
  return (t - t_start) + remaining / points_.back().kbps;
}

EwmaPredictor::EwmaPredictor(double alpha, double beta, double floor_kbps)
    : alpha_(alpha), beta_(beta), floor_kbps_(floor_kbps) {
  if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0) {
    throw ConfigError("predictor: smoothing factors must lie in [0, 1]");
  }
}

void EwmaPredictor::observe(double throughput_kbps) {
  prev2_ = prev_;
  prev_ = throughput_kbps;
  ++count_;
}

double EwmaPredictor::predict_next() {
  if (count_ == 0) throw std::logic_error("predict_next before any observation");
  if (count_ == 1) {
    level_ = prev_;
    smoothed_ = prev_;
    drift_ = 0.0;
    return std::max(floor_kbps_, prev_);
  }
  const double observed_drift = prev_ - prev2_;
  drift_ = (1.0 - alpha_) * drift_ + alpha_ * observed_drift;
  smoothed_ = (1.0 - beta_) * level_ + beta_ * prev_;
  level_ = smoothed_ + drift_;  // the recursion runs on the final prediction
  return std::max(floor_kbps_, level_);
}

NavigationWalker::NavigationWalker(const NavigationModel& model, const ViewpointGrid& grid,
                                   std::uint64_t seed)
    : model_(model), grid_(grid), rng_(make_rng(seed, 1)) {
  index_ = grid_.index_of(model.start_view);
  if (model.kind == NavigationKind::nonuniform &&
      (model.p_stay < 0.0 || model.p_stay > 1.0)) {
    throw ConfigError("navigation.p_stay: must lie in [0, 1]");
  }
}

int NavigationWalker::step() {
  if (model_.kind == NavigationKind::fixed) return index_;
  const double p_stay = model_.kind == NavigationKind::uniform ? 1.0 / 3.0 : model_.p_stay;
  const double u = uniform01(rng_);
  int next = index_;
  if (u >= p_stay) {
    next += (u < p_stay + (1.0 - p_stay) / 2.0) ? -1 : 1;
  }
  if (next < 0) next = -next;  // reflect at the edges
  const int max = grid_.max_index();
  if (next > max) next = 2 * max - next;
  index_ = next;
  return index_;
}

int NavigationWalker::advance(int steps) {
  for (int k = 0; k < steps; ++k) step();
  return index_;
}

int NavigationWalker::steps_per_segment(double tau_seconds) const {
  return static_cast<int>(std::floor(model_.rho * tau_seconds * grid_.steps_per_view() + 1e-9));
}

NavigationWindow window_for(int u_index, double rho, double lookahead_seconds,
                            const ViewpointGrid& grid) {
  const double reach_steps = rho * lookahead_seconds * grid.steps_per_view();
  const int left = static_cast<int>(std::floor(u_index - reach_steps + 1e-9));
  const int right = static_cast<int>(std::ceil(u_index + reach_steps - 1e-9));
  return {std::clamp(left, 0, grid.max_index()), std::clamp(right, 0, grid.max_index())};
}

}  // namespace mvstream
