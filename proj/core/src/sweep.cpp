#include "mvstream/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mvstream/csv.hpp"

namespace mvstream {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

NavigationModel parse_navigation(const json& j) {
  NavigationModel model;
  const std::string kind = j.value("kind", std::string("fixed"));
  if (kind == "fixed" || kind == "static") {
    model.kind = NavigationKind::fixed;
  } else if (kind == "uniform") {
    model.kind = NavigationKind::uniform;
  } else if (kind == "nonuniform") {
    model.kind = NavigationKind::nonuniform;
  } else {
    throw ConfigError("navigation.kind: expected fixed|uniform|nonuniform");
  }
  model.p_stay = j.value("p_stay", model.p_stay);
  model.start_view = j.value("start_view", model.start_view);
  model.rho = j.value("rho", model.rho);
  return model;
}

ChannelSpec parse_channel(const json& j, const std::string& base_dir) {
  ChannelSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    spec.kind = ChannelSpec::Kind::constant;
    spec.constant_kbps = j.value("kbps", spec.constant_kbps);
  } else if (kind == "markov") {
    spec.kind = ChannelSpec::Kind::markov;
    spec.activity = j.value("p_c", j.value("activity", spec.activity));
    if (j.contains("states_kbps")) {
      spec.states_kbps = j.at("states_kbps").get<std::vector<int>>();
    }
  } else if (kind == "trace") {
    spec.kind = ChannelSpec::Kind::trace;
    fs::path p = j.at("path").get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    spec.trace_path = p.string();
  } else {
    throw ConfigError("channel.kind: expected constant|markov|trace");
  }
  return spec;
}

struct Cell {
  std::size_t index = 0;
  std::size_t catalog = 0;
  std::string video;
  Algo algo = Algo::optimal;
  std::optional<std::pair<double, double>> window;
  std::optional<double> budget_kbps;
  std::size_t channel_index = 0;
  ChannelSpec channel;
  std::size_t nav_index = 0;
  NavigationModel navigation;
  std::string label;
};

struct CellOutput {
  std::string summary_row;
  std::vector<std::string> timeseries_rows;
  std::vector<std::pair<std::string, std::string>> run_files;  // name -> content
  std::string error;
};

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.')) c = '_';
  }
  return s;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
  }
  fs::rename(tmp, path);
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep spec parse error: ") + e.what());
  }
  try {
    ExperimentSpec spec;
    spec.name = j.value("name", std::string("sweep"));
    for (const std::string& p : j.at("catalogs").get<std::vector<std::string>>()) {
      fs::path path = p;
      if (path.is_relative() && !base_dir.empty()) path = fs::path(base_dir) / path;
      spec.catalog_paths.push_back(path.string());
    }
    spec.videos = j.at("videos").get<std::vector<std::string>>();
    spec.scenario = j.value("scenario", spec.scenario);
    if (spec.scenario != "low" && spec.scenario != "high") {
      throw ConfigError("scenario: expected \"low\" or \"high\"");
    }
    if (j.contains("windows")) {
      for (const auto& w : j.at("windows")) {
        spec.windows.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
      }
    }
    if (j.contains("budgets_kbps")) {
      spec.budgets_kbps = j.at("budgets_kbps").get<std::vector<double>>();
    }
    if (j.contains("channels")) {
      for (const auto& c : j.at("channels")) spec.channels.push_back(parse_channel(c, base_dir));
    }
    if (j.contains("navigation")) spec.navigation = parse_navigation(j.at("navigation"));
    if (j.contains("video_navigation")) {
      for (const auto& [video, jn] : j.at("video_navigation").items()) {
        spec.video_navigation[video] = parse_navigation(jn);
      }
    }
    for (const std::string& a : j.at("algos").get<std::vector<std::string>>()) {
      spec.algos.push_back(parse_algo(a));
    }
    spec.segments = j.value("segments", spec.segments);
    spec.navigation_runs = j.value("navigation_runs", spec.navigation_runs);
    spec.channel_runs = j.value("channel_runs", spec.channel_runs);
    spec.seed = j.value("seed", spec.seed);
    spec.emit_per_run = j.value("emit_per_run", spec.emit_per_run);
    if (j.contains("session")) {
      const auto& js = j.at("session");
      spec.session.tau = js.value("tau", spec.session.tau);
      spec.session.lookahead = js.value("lookahead", spec.session.lookahead);
      spec.session.buffer_reference_s =
          js.value("buffer_reference_s", spec.session.buffer_reference_s);
      spec.session.kappa = js.value("kappa", spec.session.kappa);
      spec.session.initial_buffer_s =
          js.value("initial_buffer_s", spec.session.initial_buffer_s);
      spec.session.alpha_tcp = js.value("alpha_tcp", spec.session.alpha_tcp);
      spec.session.beta_tcp = js.value("beta_tcp", spec.session.beta_tcp);
      if (js.contains("prediction")) {
        const std::string p = js.at("prediction").get<std::string>();
        if (p == "exact") {
          spec.session.prediction = PredictionMode::exact;
        } else if (p == "ewma") {
          spec.session.prediction = PredictionMode::ewma;
        } else {
          throw ConfigError("session.prediction: expected exact|ewma");
        }
      }
    }
    if (spec.videos.empty()) throw ConfigError("videos: must not be empty");
    if (spec.algos.empty()) throw ConfigError("algos: must not be empty");
    if (spec.segments < 1) throw ConfigError("segments: must be >= 1");
    if (spec.navigation_runs < 1 || spec.channel_runs < 1) {
      throw ConfigError("run counts must be >= 1");
    }
    if (spec.scenario == "low") {
      if (spec.windows.empty()) throw ConfigError("low scenario: windows required");
      if (spec.budgets_kbps.empty() && spec.channels.empty()) {
        throw ConfigError("low scenario: budgets_kbps or channels required");
      }
    } else if (spec.channels.empty()) {
      throw ConfigError("high scenario: channels required");
    }
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep spec error: ") + e.what());
  }
}

ExperimentSpec ExperimentSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep spec: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), fs::path(path).parent_path().string());
}

const char* const kSummaryCsvHeader =
    "set,video,scenario,algo,channel,window,budget_kbps,runs,segments,mean_distortion,"
    "p50_distortion,p95_distortion,mean_variation,rebuffer_count,rebuffer_s,mean_buffer_s,"
    "sentinel_count";

const char* const kTimeseriesCsvHeader =
    "set,video,scenario,algo,channel,window,budget_kbps,segment,mean_distortion,mean_buffer_s";

SweepResult run_sweep(const ExperimentSpec& spec, const std::string& out_dir, int workers) {
  // Load every catalog up front; config errors abort the sweep as a whole.
  std::vector<CatalogBundle> bundles;
  for (const std::string& path : spec.catalog_paths) {
    bundles.push_back(load_catalog_file(path));
    if (bundles.back().name.empty()) {
      bundles.back().name = fs::path(path).stem().string();
    }
  }
  for (const CatalogBundle& bundle : bundles) {
    for (const std::string& video : spec.videos) bundle.profile(video);  // must resolve
  }

  // Materialize the cell grid in deterministic order.
  std::vector<Cell> cells;
  for (std::size_t ci = 0; ci < bundles.size(); ++ci) {
    for (const std::string& video : spec.videos) {
      NavigationModel nav = spec.navigation;
      if (auto it = spec.video_navigation.find(video); it != spec.video_navigation.end()) {
        nav = it->second;
      }
      std::size_t nav_index =
          std::distance(spec.video_navigation.begin(), spec.video_navigation.find(video));
      if (spec.video_navigation.find(video) == spec.video_navigation.end()) nav_index = 0;
      for (Algo algo : spec.algos) {
        if (spec.scenario == "low") {
          for (std::size_t wi = 0; wi < spec.windows.size(); ++wi) {
            auto add_low_cell = [&](const ChannelSpec& channel, double budget,
                                    std::size_t channel_index) {
              Cell cell;
              cell.catalog = ci;
              cell.video = video;
              cell.algo = algo;
              cell.window = spec.windows[wi];
              cell.budget_kbps = budget;
              cell.channel = channel;
              cell.channel_index = channel_index;
              cell.nav_index = wi;
              NavigationModel fixed;
              fixed.kind = NavigationKind::fixed;
              fixed.start_view = (spec.windows[wi].first + spec.windows[wi].second) / 2.0;
              fixed.rho = nav.rho;
              cell.navigation = fixed;
              cells.push_back(std::move(cell));
            };
            if (!spec.budgets_kbps.empty()) {
              for (std::size_t bi = 0; bi < spec.budgets_kbps.size(); ++bi) {
                ChannelSpec channel;
                channel.kind = ChannelSpec::Kind::constant;
                channel.constant_kbps = spec.budgets_kbps[bi];
                add_low_cell(channel, spec.budgets_kbps[bi], bi);
              }
            } else {
              for (std::size_t chi = 0; chi < spec.channels.size(); ++chi) {
                add_low_cell(spec.channels[chi], 0.0, chi);
              }
            }
          }
        } else {
          for (std::size_t chi = 0; chi < spec.channels.size(); ++chi) {
            Cell cell;
            cell.catalog = ci;
            cell.video = video;
            cell.algo = algo;
            cell.channel = spec.channels[chi];
            cell.channel_index = chi;
            cell.nav_index = nav_index;
            cell.navigation = nav;
            cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Cell& cell = cells[i];
    cell.index = i;
    std::ostringstream label;
    label << bundles[cell.catalog].name << '_' << cell.video << '_' << algo_name(cell.algo)
          << '_' << cell.channel.label();
    if (cell.window) label << "_w" << cell.window->first << '-' << cell.window->second;
    if (cell.budget_kbps && *cell.budget_kbps > 0) label << "_b" << *cell.budget_kbps;
    cell.label = sanitize(label.str());
  }

  // Run cells concurrently; all output is buffered and written after the
  // join so files and row order never depend on scheduling.
  std::vector<CellOutput> outputs(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      CellOutput& out = outputs[i];
      try {
        const CatalogBundle& bundle = bundles[cell.catalog];
        const VideoProfile& profile = bundle.profile(cell.video);

        SessionConfig config = spec.session;
        config.algo = cell.algo;
        config.num_segments = spec.segments;
        if (cell.window) {
          config.fixed_window = NavigationWindow::snapped(
              bundle.catalog.grid(), cell.window->first, cell.window->second);
        }

        std::vector<SessionRecord> records;
        records.reserve(static_cast<std::size_t>(spec.navigation_runs) * spec.channel_runs);
        std::vector<double> ts_dist(spec.segments, 0.0), ts_buf(spec.segments, 0.0);
        for (int nr = 0; nr < spec.navigation_runs; ++nr) {
          for (int cr = 0; cr < spec.channel_runs; ++cr) {
            // Streams are paired across algorithms, catalogs and videos:
            // the channel draw depends only on (channel spec, channel run),
            // navigation only on (navigation axis, navigation run).
            config.channel_seed =
                split_seed(spec.seed, 0x10000u + cell.channel_index * 1024 + cr);
            config.navigation_seed =
                split_seed(spec.seed, 0x20000u + cell.nav_index * 1024 + nr);
            config.seed = split_seed(spec.seed, cell.index * 4096 + nr * 64 + cr);
            records.push_back(run_session(config, bundle.catalog, profile, cell.channel,
                                          cell.navigation));
            const SessionRecord& rec = records.back();
            for (int s = 0; s < spec.segments; ++s) {
              ts_dist[s] += rec.segments[s].distortion;
              ts_buf[s] += rec.segments[s].buffer_s;
            }
            if (spec.emit_per_run) {
              std::ostringstream name;
              name << cell.label << "__run" << nr << '_' << cr << ".csv";
              out.run_files.emplace_back(name.str(), session_csv(rec));
            }
          }
        }

        const SessionSummary summary = aggregate(records);
        std::ostringstream context;
        context << bundles[cell.catalog].name << ',' << cell.video << ',' << spec.scenario
                << ',' << algo_name(cell.algo) << ',' << cell.channel.label() << ',';
        if (cell.window) {
          context << csv::number(cell.window->first) << ':'
                  << csv::number(cell.window->second);
        }
        context << ',';
        if (cell.budget_kbps && *cell.budget_kbps > 0) {
          context << csv::number(*cell.budget_kbps);
        }

        std::ostringstream row;
        row << context.str() << ',' << records.size() << ',' << summary.segments << ','
            << csv::number(summary.mean_distortion) << ','
            << csv::number(summary.p50_distortion) << ','
            << csv::number(summary.p95_distortion) << ','
            << csv::number(summary.mean_variation) << ',' << summary.rebuffer_count << ','
            << csv::number(summary.rebuffer_seconds) << ','
            << csv::number(summary.mean_buffer_s) << ',' << summary.sentinel_count;
        out.summary_row = row.str();

        const double runs = static_cast<double>(records.size());
        for (int s = 0; s < spec.segments; ++s) {
          std::ostringstream ts;
          ts << context.str() << ',' << (s + 1) << ',' << csv::number(ts_dist[s] / runs)
             << ',' << csv::number(ts_buf[s] / runs);
          out.timeseries_rows.push_back(ts.str());
        }
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };

  const int thread_count = std::max(1, workers);
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  SweepResult result;
  result.cells = static_cast<int>(cells.size());
  result.runs = spec.navigation_runs * spec.channel_runs * result.cells;

  std::string summary(kSummaryCsvHeader);
  summary += '\n';
  std::string timeseries(kTimeseriesCsvHeader);
  timeseries += '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!outputs[i].error.empty()) {
      result.failures.push_back({cells[i].label, outputs[i].error});
      continue;
    }
    summary += outputs[i].summary_row;
    summary += '\n';
    for (const std::string& row : outputs[i].timeseries_rows) {
      timeseries += row;
      timeseries += '\n';
    }
  }

  const fs::path dir(out_dir);
  write_atomic(dir / "summary.csv", summary);
  result.files_written.push_back((dir / "summary.csv").string());
  write_atomic(dir / "timeseries.csv", timeseries);
  result.files_written.push_back((dir / "timeseries.csv").string());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const auto& [name, content] : outputs[i].run_files) {
      const fs::path path = dir / "runs" / name;
      write_atomic(path, content);
      result.files_written.push_back(path.string());
    }
  }
  return result;
}

}  // namespace mvstream
