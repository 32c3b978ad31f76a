#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mvstream/sweep.hpp"

using namespace mvstream;
namespace fs = std::filesystem;

namespace {

std::string data_path(const std::string& rel) { return std::string(MVSTREAM_DATA_DIR) + "/" + rel; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string tiny_low_spec() {
  return R"({
    "name": "tiny_low",
    "catalogs": [")" +
         data_path("catalogs/L2.json") + R"("],
    "videos": ["dancer", "hall"],
    "scenario": "low",
    "windows": [[5.0, 7.0]],
    "budgets_kbps": [1000, 3000, 6000, 10000],
    "algos": ["optimal", "greedy", "2views"],
    "segments": 2,
    "seed": 5,
    "session": { "kappa": 0, "prediction": "exact" },
    "emit_per_run": true
  })";
}

std::string tiny_high_spec() {
  return R"({
    "name": "tiny_high",
    "catalogs": [")" +
         data_path("catalogs/L2.json") + R"("],
    "videos": ["shark"],
    "scenario": "high",
    "channels": [{ "kind": "markov", "p_c": 0.5 }, { "kind": "markov", "p_c": 0.9 }],
    "navigation": { "kind": "nonuniform", "p_stay": 0.3, "start_view": 2.4, "rho": 0.25 },
    "algos": ["optimal", "2views"],
    "segments": 6,
    "navigation_runs": 2,
    "channel_runs": 2,
    "seed": 31,
    "session": { "kappa": 0, "prediction": "exact" },
    "emit_per_run": false
  })";
}

std::map<fs::path, std::string> snapshot(const fs::path& dir) {
  std::map<fs::path, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), dir)] = slurp(entry.path());
    }
  }
  return files;
}

}  // namespace

TEST_CASE("sweep reruns with identical seeds are byte-identical") {
  const ExperimentSpec spec = ExperimentSpec::from_json(tiny_low_spec());
  const fs::path dir_a = fs::temp_directory_path() / "mvstream_sweep_a";
  const fs::path dir_b = fs::temp_directory_path() / "mvstream_sweep_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  const SweepResult ra = run_sweep(spec, dir_a.string(), 1);
  const SweepResult rb = run_sweep(spec, dir_b.string(), 1);
  CHECK(ra.failures.empty());
  CHECK(rb.failures.empty());
  CHECK(snapshot(dir_a) == snapshot(dir_b));
}

TEST_CASE("worker count does not change the output bytes") {
  const ExperimentSpec spec = ExperimentSpec::from_json(tiny_high_spec());
  const fs::path dir_a = fs::temp_directory_path() / "mvstream_sweep_w1";
  const fs::path dir_b = fs::temp_directory_path() / "mvstream_sweep_w4";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  (void)run_sweep(spec, dir_a.string(), 1);
  (void)run_sweep(spec, dir_b.string(), 4);
  CHECK(snapshot(dir_a) == snapshot(dir_b));
}

TEST_CASE("low sweep distortion is non-increasing in budget per video/algo") {
  const ExperimentSpec spec = ExperimentSpec::from_json(tiny_low_spec());
  const fs::path dir = fs::temp_directory_path() / "mvstream_sweep_mono";
  fs::remove_all(dir);
  const SweepResult r = run_sweep(spec, dir.string(), 2);
  REQUIRE(r.failures.empty());

  // summary schema: set,video,scenario,algo,channel,window,budget_kbps,runs,
  // segments,mean_distortion,...
  std::ifstream in(dir / "summary.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == kSummaryCsvHeader);
  std::map<std::string, std::map<double, double>> curves;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::istringstream row(line);
    std::string col;
    while (std::getline(row, col, ',')) cols.push_back(col);
    REQUIRE(cols.size() >= 10);
    curves[cols[1] + "/" + cols[3]][std::stod(cols[6])] = std::stod(cols[9]);
  }
  CHECK(curves.size() == 6);  // 2 videos x 3 algos
  for (const auto& [key, curve] : curves) {
    double prev = 2.0;
    for (const auto& [budget, distortion] : curve) {  // map: ascending budgets
      CHECK(distortion <= prev + 1e-9);
      prev = distortion;
    }
  }
}

TEST_CASE("optimal never loses to the lateral-pair baseline across a high sweep") {
  const ExperimentSpec spec = ExperimentSpec::from_json(tiny_high_spec());
  const fs::path dir = fs::temp_directory_path() / "mvstream_sweep_dom";
  fs::remove_all(dir);
  const SweepResult r = run_sweep(spec, dir.string(), 2);
  REQUIRE(r.failures.empty());
  std::ifstream in(dir / "summary.csv");
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::map<std::string, double>> by_channel;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::istringstream row(line);
    std::string col;
    while (std::getline(row, col, ',')) cols.push_back(col);
    by_channel[cols[4]][cols[3]] = std::stod(cols[9]);
  }
  REQUIRE(by_channel.size() == 2);
  for (const auto& [channel, algos] : by_channel) {
    CHECK(algos.at("optimal") <= algos.at("2views") + 1e-9);
  }
}

TEST_CASE("failing cells are reported without sinking the sweep") {
  ExperimentSpec spec = ExperimentSpec::from_json(tiny_high_spec());
  ChannelSpec bad;
  bad.kind = ChannelSpec::Kind::trace;
  bad.trace_path = "/nonexistent/trace.csv";
  spec.channels.push_back(bad);
  const fs::path dir = fs::temp_directory_path() / "mvstream_sweep_fail";
  fs::remove_all(dir);
  const SweepResult r = run_sweep(spec, dir.string(), 2);
  CHECK(r.failures.size() == 2);  // one failed channel x two algos
  CHECK(fs::exists(dir / "summary.csv"));
}

TEST_CASE("spec validation rejects unknown videos and empty axes") {
  CHECK_THROWS_AS(ExperimentSpec::from_json(R"({"catalogs":[],"videos":[],"algos":[]})"),
                  ConfigError);
  ExperimentSpec spec = ExperimentSpec::from_json(tiny_low_spec());
  spec.videos.push_back("nosuchvideo");
  const fs::path dir = fs::temp_directory_path() / "mvstream_sweep_badvid";
  fs::remove_all(dir);
  CHECK_THROWS_AS(run_sweep(spec, dir.string(), 1), ConfigError);
}

TEST_CASE("checked-in sweep presets parse") {
  for (const char* name :
       {"specs/low_interactivity.json", "specs/high_interactivity.json",
        "specs/realistic_trace.json"}) {
    const ExperimentSpec spec = ExperimentSpec::from_file(data_path(name));
    CHECK_FALSE(spec.catalog_paths.empty());
    CHECK_FALSE(spec.algos.empty());
  }
}
