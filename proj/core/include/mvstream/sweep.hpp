#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mvstream/session.hpp"

namespace mvstream {

/// One experiment grid: the cartesian product of catalogs, videos,
/// algorithms and either (window x budget) axes under constant channels
/// (static-window scenarios) or stochastic channel specs (dynamic
/// scenarios), each cell replayed over navigation x channel runs with
/// reproducible per-axis seeds shared across algorithms.
struct ExperimentSpec {
  std::string name;
  std::vector<std::string> catalog_paths;
  std::vector<std::string> videos;
  std::string scenario = "low";  // "low": static windows, "high": dynamic navigation
  std::vector<std::pair<double, double>> windows;  // low scenario
  std::vector<double> budgets_kbps;                // low scenario (constant channels)
  std::vector<ChannelSpec> channels;               // high scenario
  NavigationModel navigation;                      // high scenario default
  std::map<std::string, NavigationModel> video_navigation;  // per-video override
  std::vector<Algo> algos;
  int segments = 50;
  int navigation_runs = 1;
  int channel_runs = 1;
  std::uint64_t seed = 1;
  SessionConfig session;  // algo/seed/window fields are filled per cell
  bool emit_per_run = true;

  static ExperimentSpec from_json(const std::string& text, const std::string& base_dir = "");
  static ExperimentSpec from_file(const std::string& path);
};

struct SweepFailure {
  std::string cell;
  std::string error;
};

struct SweepResult {
  int cells = 0;
  int runs = 0;
  std::vector<std::string> files_written;
  std::vector<SweepFailure> failures;
};

extern const char* const kSummaryCsvHeader;
extern const char* const kTimeseriesCsvHeader;

/// Executes the grid with up to `workers` concurrent cells and writes
/// summary.csv, timeseries.csv and (optionally) per-run session CSVs under
/// `out_dir`. Outputs are byte-stable for a fixed spec and seed regardless
/// of the worker count.
SweepResult run_sweep(const ExperimentSpec& spec, const std::string& out_dir, int workers = 1);

}  // namespace mvstream
