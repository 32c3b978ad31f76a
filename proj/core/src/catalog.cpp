#include "mvstream/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace mvstream {

namespace {

constexpr double kGridTolerance = 1e-9;

}  // namespace

ViewpointGrid::ViewpointGrid(int num_cameras, double delta) : num_cameras_(num_cameras) {
  if (num_cameras < 1) {
    throw ConfigError("grid.num_cameras: must be >= 1");
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ConfigError("grid.delta: must satisfy 0 < delta <= 1");
  }
  const double inv = 1.0 / delta;
  steps_per_view_ = static_cast<int>(std::lround(inv));
  if (steps_per_view_ < 1 || std::abs(inv - steps_per_view_) > 1e-6) {
    throw ConfigError("grid.delta: 1/delta must be integral");
  }
}

std::optional<int> ViewpointGrid::try_index_of(double u) const {
  const double raw = (u - 1.0) * steps_per_view_;
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > kGridTolerance * std::max(1.0, std::abs(raw))) {
    return std::nullopt;
  }
  const int index = static_cast<int>(rounded);
  if (!contains(index)) return std::nullopt;
  return index;
}

int ViewpointGrid::index_of(double u) const {
  if (auto idx = try_index_of(u)) return *idx;
  std::ostringstream msg;
  msg << "viewpoint " << u << ": off-grid endpoint or outside [1, " << num_cameras_ << "]";
  throw std::invalid_argument(msg.str());
}

int ViewpointGrid::floor_index(double u) const {
  const double raw = (u - 1.0) * steps_per_view_;
  const int index = static_cast<int>(std::floor(raw + kGridTolerance));
  return std::clamp(index, 0, max_index());
}

int ViewpointGrid::ceil_index(double u) const {
  const double raw = (u - 1.0) * steps_per_view_;
  const int index = static_cast<int>(std::ceil(raw - kGridTolerance));
  return std::clamp(index, 0, max_index());
}

Catalog::Catalog(ViewpointGrid grid, std::map<int, std::vector<int>> per_view_rates,
                 int depth_rate_overhead_kbps, CodingMode coding_mode)
    : grid_(grid),
      per_view_rates_(std::move(per_view_rates)),
      depth_overhead_kbps_(depth_rate_overhead_kbps),
      coding_mode_(coding_mode) {
  if (per_view_rates_.empty()) {
    throw ConfigError("per_view_rates: catalog holds no representations");
  }
  if (depth_overhead_kbps_ < 0) {
    throw ConfigError("depth_rate_overhead_kbps: must be >= 0");
  }
  int gcd = depth_overhead_kbps_ > 0 ? depth_overhead_kbps_ : 0;
  for (auto& [view, rates] : per_view_rates_) {
    if (!grid_.valid_camera(view)) {
      std::ostringstream msg;
      msg << "per_view_rates[" << view << "]: view out of grid (valid cameras 1.."
          << grid_.num_cameras() << ")";
      throw ConfigError(msg.str());
    }
    if (rates.empty()) {
      throw ConfigError("per_view_rates[" + std::to_string(view) + "]: empty rate list");
    }
    std::sort(rates.begin(), rates.end());
    if (std::adjacent_find(rates.begin(), rates.end()) != rates.end()) {
      throw ConfigError("per_view_rates[" + std::to_string(view) + "]: duplicate rate");
    }
    if (rates.front() <= 0) {
      throw ConfigError("per_view_rates[" + std::to_string(view) + "]: rate must be > 0");
    }
    for (int r : rates) gcd = std::gcd(gcd, r);
    views_.push_back(view);
  }
  rate_gcd_ = std::max(gcd, 1);
}

bool Catalog::has_view(int camera_id) const { return per_view_rates_.count(camera_id) != 0; }

const std::vector<int>& Catalog::rates(int camera_id) const {
  auto it = per_view_rates_.find(camera_id);
  if (it == per_view_rates_.end()) {
    throw std::invalid_argument("catalog has no view " + std::to_string(camera_id));
  }
  return it->second;
}

std::size_t Catalog::representation_count() const {
  std::size_t n = 0;
  for (const auto& [view, rates] : per_view_rates_) n += rates.size();
  return n;
}

int Catalog::min_rate_overall() const {
  int best = rates(views_.front()).front();
  for (int v : views_) best = std::min(best, min_rate(v));
  return best;
}

const VideoProfile& CatalogBundle::profile(const std::string& video) const {
  auto it = profiles.find(video);
  if (it == profiles.end()) {
    throw ConfigError("profiles: unknown video \"" + video + "\"");
  }
  return it->second;
}

namespace {

using nlohmann::json;

RdParams parse_rd(const json& j, const std::string& where) {
  RdParams p;
  p.a = j.at("a").get<double>();
  p.b = j.at("b").get<double>();
  p.e = j.at("e").get<double>();
  if (!(p.a > 0.0 && p.a <= 1.0)) throw ConfigError(where + ".a: must satisfy 0 < a <= 1");
  if (!(p.b > 0.0)) throw ConfigError(where + ".b: must be > 0");
  if (!(p.e > 0.0)) throw ConfigError(where + ".e: must be > 0");
  return p;
}

void check_rd_range(const RdParams& p, const Catalog& catalog, const std::string& where) {
  for (int view : catalog.views()) {
    for (int rate : catalog.rates(view)) {
      const double d = 1.0 - (p.a - p.b / (rate + p.e));
      if (d < -1e-12 || d > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << where << ": rate-distortion value " << d << " at rate " << rate
            << " kbps leaves [0, 1]";
        throw ConfigError(msg.str());
      }
    }
  }
}

}  // namespace

CatalogBundle load_catalog(const std::string& config_text) {
  json j;
  try {
    j = json::parse(config_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  try {
    const auto& jgrid = j.at("grid");
    ViewpointGrid grid(jgrid.at("num_cameras").get<int>(), jgrid.at("delta").get<double>());

    CodingMode mode = CodingMode::independent;
    if (j.contains("coding_mode")) {
      const std::string m = j.at("coding_mode").get<std::string>();
      if (m == "independent") {
        mode = CodingMode::independent;
      } else if (m == "joint-paired") {
        mode = CodingMode::joint_paired;
      } else {
        throw ConfigError("coding_mode: must be \"independent\" or \"joint-paired\"");
      }
    }

    std::map<int, std::vector<int>> per_view;
    if (j.contains("camera_views")) {
      const auto shared = j.value("rates_kbps", std::vector<int>{});
      for (int view : j.at("camera_views").get<std::vector<int>>()) {
        if (per_view.count(view)) {
          throw ConfigError("camera_views: duplicate view " + std::to_string(view));
        }
        per_view[view] = shared;
      }
    }
    if (j.contains("per_view_rates")) {
      for (const auto& [key, value] : j.at("per_view_rates").items()) {
        per_view[std::stoi(key)] = value.get<std::vector<int>>();
      }
    }

    Catalog catalog(grid, std::move(per_view), j.value("depth_rate_overhead_kbps", 0), mode);

    CatalogBundle bundle{j.value("name", std::string{}), std::move(catalog), {}, j.value("note", std::string{})};
    for (const auto& [video, jp] : j.at("profiles").items()) {
      VideoProfile p;
      p.name = video;
      p.independent = parse_rd(jp, "profiles." + video);
      if (jp.contains("joint")) {
        p.joint = parse_rd(jp.at("joint"), "profiles." + video + ".joint");
      }
      p.xi = jp.at("xi").get<double>();
      p.inpaint_distortion = jp.at("inpaint_distortion").get<double>();
      if (!(p.xi > 0.0)) throw ConfigError("profiles." + video + ".xi: must be > 0");
      if (p.inpaint_distortion < 0.0 || p.inpaint_distortion > 1.0) {
        throw ConfigError("profiles." + video + ".inpaint_distortion: must lie in [0, 1]");
      }
      check_rd_range(p.independent, bundle.catalog, "profiles." + video);
      if (p.joint) check_rd_range(*p.joint, bundle.catalog, "profiles." + video + ".joint");
      bundle.profiles[video] = std::move(p);
    }
    if (bundle.profiles.empty()) throw ConfigError("profiles: at least one video required");
    return bundle;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
}

CatalogBundle load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open catalog config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_catalog(buf.str());
}

std::string serialize_catalog(const CatalogBundle& bundle) {
  json j;
  if (!bundle.name.empty()) j["name"] = bundle.name;
  if (!bundle.note.empty()) j["note"] = bundle.note;
  j["grid"] = {{"num_cameras", bundle.catalog.grid().num_cameras()},
               {"delta", bundle.catalog.grid().delta()}};
  j["coding_mode"] =
      bundle.catalog.coding_mode() == CodingMode::independent ? "independent" : "joint-paired";
  j["depth_rate_overhead_kbps"] = bundle.catalog.depth_rate_overhead_kbps();
  json rates = json::object();
  for (int view : bundle.catalog.views()) {
    rates[std::to_string(view)] = bundle.catalog.rates(view);
  }
  j["per_view_rates"] = std::move(rates);
  json profiles = json::object();
  for (const auto& [video, p] : bundle.profiles) {
    json jp = {{"a", p.independent.a}, {"b", p.independent.b}, {"e", p.independent.e},
               {"xi", p.xi},           {"inpaint_distortion", p.inpaint_distortion}};
    if (p.joint) {
      jp["joint"] = {{"a", p.joint->a}, {"b", p.joint->b}, {"e", p.joint->e}};
    }
    profiles[video] = std::move(jp);
  }
  j["profiles"] = std::move(profiles);
  return j.dump(2) + "\n";
}

NavigationWindow NavigationWindow::exact(const ViewpointGrid& grid, double u_left,
                                         double u_right) {
  if (u_right < u_left) throw std::invalid_argument("window: u_right < u_left");
  return {grid.index_of(u_left), grid.index_of(u_right)};
}

NavigationWindow NavigationWindow::snapped(const ViewpointGrid& grid, double u_left,
                                           double u_right) {
  if (u_right < u_left) throw std::invalid_argument("window: u_right < u_left");
  return {grid.floor_index(u_left), grid.ceil_index(u_right)};
}

std::vector<double> viewpoints_in(const NavigationWindow& window, const ViewpointGrid& grid) {
  if (!grid.contains(window.left_index) || !grid.contains(window.right_index) ||
      window.right_index < window.left_index) {
    throw std::invalid_argument("window indices outside grid");
  }
  std::vector<double> out;
  out.reserve(window.num_viewpoints());
  for (int i = window.left_index; i <= window.right_index; ++i) {
    out.push_back(grid.viewpoint(i));
  }
  return out;
}

}  // namespace mvstream
