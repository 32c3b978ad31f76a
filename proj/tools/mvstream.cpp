// Experiment harness for the multiview streaming stack: single solves,
// session replays, experiment sweeps, exhaustive cross-checks and trace
// conversion. Exit codes: 0 success, 2 configuration error, 3 infeasible,
// 4 partial sweep failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvstream/csv.hpp"
#include "mvstream/environment.hpp"
#include "mvstream/instance_gen.hpp"
#include "mvstream/oracle.hpp"
#include "mvstream/session.hpp"
#include "mvstream/solver.hpp"
#include "mvstream/solver_dp.hpp"
#include "mvstream/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitPartial = 4;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<double, double> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw mvstream::ConfigError("--window expects L:R, got \"" + text + "\"");
  }
  return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw mvstream::ConfigError("cannot open output file: " + path);
  out << content;
}

std::string plan_views(const mvstream::DownloadPlan& plan) {
  std::string s;
  for (std::size_t i = 0; i < plan.items.size(); ++i) {
    if (i) s += '|';
    s += std::to_string(plan.items[i].view);
  }
  return s;
}

std::string plan_rates(const mvstream::DownloadPlan& plan) {
  std::string s;
  for (std::size_t i = 0; i < plan.items.size(); ++i) {
    if (i) s += '|';
    s += std::to_string(plan.items[i].rate_kbps);
  }
  return s;
}

int cmd_solve(const std::string& set_path, const std::string& video,
              const std::string& window_text, double budget, const std::string& algo_name_in,
              double pred_view, bool have_pred, const std::string& out_path) {
  using namespace mvstream;
  const CatalogBundle bundle = load_catalog_file(set_path);
  const VideoProfile& profile = bundle.profile(video);
  const auto [wl, wr] = parse_window(window_text);
  const NavigationWindow window = NavigationWindow::snapped(bundle.catalog.grid(), wl, wr);
  const Algo algo = parse_algo(algo_name_in);

  std::optional<double> predicted;
  if (have_pred) predicted = pred_view;
  const SolveResult result =
      solve_with(algo, bundle.catalog, profile, window, budget, predicted);

  std::ostringstream csv_row;
  csv_row << "set,video,algo,window,budget_kbps,feasible,views,rates_kbps,total_rate_kbps,"
             "distortion\n";
  csv_row << bundle.name << ',' << video << ',' << algo_name(algo) << ','
          << csv::number(window.u_left(bundle.catalog.grid())) << ':'
          << csv::number(window.u_right(bundle.catalog.grid())) << ',' << csv::number(budget)
          << ',' << (result.feasible() ? 1 : 0) << ',';
  if (result.feasible()) {
    csv_row << plan_views(*result.plan) << ',' << plan_rates(*result.plan) << ','
            << result.plan->total_rate_kbps << ',' << csv::number(result.distortion) << '\n';
  } else {
    csv_row << ",,," << csv::number(result.distortion) << '\n';
  }
  if (!out_path.empty()) write_output(out_path, csv_row.str());

  if (!result.feasible()) {
    std::cout << "infeasible: no plan covers window [" << window.u_left(bundle.catalog.grid())
              << ", " << window.u_right(bundle.catalog.grid()) << "] within "
              << csv::number(budget) << " kbps";
    if (result.cheapest_covering_kbps > 0) {
      std::cout << " (cheapest covering plan costs " << result.cheapest_covering_kbps
                << " kbps)";
    }
    std::cout << "\n";
    return kExitInfeasible;
  }
  std::cout << "algo " << algo_name(algo) << ", window ["
            << window.u_left(bundle.catalog.grid()) << ", "
            << window.u_right(bundle.catalog.grid()) << "], budget " << csv::number(budget)
            << " kbps\n";
  std::cout << "views:      " << plan_views(*result.plan) << "\n";
  std::cout << "rates_kbps: " << plan_rates(*result.plan) << "\n";
  std::cout << "total_rate: " << result.plan->total_rate_kbps << " kbps\n";
  std::cout << "distortion: " << csv::number(result.distortion) << "\n";
  return kExitOk;
}

int cmd_session(const std::string& set_path, const std::string& video,
                mvstream::SessionConfig config, const mvstream::ChannelSpec& channel,
                const mvstream::NavigationModel& navigation, const std::string& window_text,
                const std::string& out_path) {
  using namespace mvstream;
  const CatalogBundle bundle = load_catalog_file(set_path);
  const VideoProfile& profile = bundle.profile(video);
  if (!window_text.empty()) {
    const auto [wl, wr] = parse_window(window_text);
    config.fixed_window = NavigationWindow::snapped(bundle.catalog.grid(), wl, wr);
  }
  const SessionRecord record =
      run_session(config, bundle.catalog, profile, channel, navigation);
  write_output(out_path, session_csv(record));

  const SessionSummary summary = aggregate({&record, 1});
  std::cerr << "segments=" << summary.segments
            << " mean_distortion=" << csv::number(summary.mean_distortion)
            << " rebuffers=" << summary.rebuffer_count
            << " mean_buffer_s=" << csv::number(summary.mean_buffer_s)
            << " sentinels=" << summary.sentinel_count << "\n";
  return kExitOk;
}

int cmd_oracle_single(const std::string& set_path, const std::string& video,
                      const std::string& window_text, double budget, bool no_coverage,
                      const std::string& out_path) {
  using namespace mvstream;
  const CatalogBundle bundle = load_catalog_file(set_path);
  const VideoProfile& profile = bundle.profile(video);
  const auto [wl, wr] = parse_window(window_text);
  const NavigationWindow window = NavigationWindow::snapped(bundle.catalog.grid(), wl, wr);

  OracleOptions options;
  options.require_coverage = !no_coverage;
  options.collect_log = true;
  const OracleResult result =
      solve_exhaustive(bundle.catalog, profile, window, budget, options);

  std::ostringstream log;
  log << "views,rates_kbps,total_rate_kbps,within_budget,covers_window,distortion\n";
  for (const OracleRow& row : result.log) {
    log << plan_views(row.plan) << ',' << plan_rates(row.plan) << ','
        << row.plan.total_rate_kbps << ',' << (row.within_budget ? 1 : 0) << ','
        << (row.covers_window ? 1 : 0) << ','
        << (row.within_budget && (row.covers_window || no_coverage)
                ? csv::number(row.distortion)
                : "")
        << '\n';
  }
  write_output(out_path, log.str());

  std::cerr << "enumerated=" << result.enumerated << " admissible=" << result.admissible
            << "\n";
  if (!result.best.feasible()) {
    std::cerr << "infeasible within budget\n";
    return kExitInfeasible;
  }
  std::cerr << "best views=" << plan_views(*result.best.plan)
            << " rates=" << plan_rates(*result.best.plan)
            << " distortion=" << csv::number(result.best.distortion) << "\n";
  return kExitOk;
}

int cmd_oracle_check(int instances, std::uint64_t seed, bool no_coverage) {
  using namespace mvstream;
  if (instances < 1) throw ConfigError("--check: instance count must be >= 1");
  auto rng = make_rng(seed, 7);
  double max_gap = 0.0;
  int feasible = 0;
  for (int k = 0; k < instances; ++k) {
    const std::uint64_t instance_seed = rng();
    auto inst_rng = std::mt19937_64(instance_seed);
    const RandomInstance inst = random_small_instance(inst_rng);
    const SolveResult dp =
        solve_optimal(inst.catalog, inst.profile, inst.window, inst.budget_kbps);
    OracleOptions options;
    options.require_coverage = !no_coverage;
    const OracleResult oracle = solve_exhaustive(inst.catalog, inst.profile, inst.window,
                                                 inst.budget_kbps, options);
    if (!no_coverage && dp.feasible() != oracle.best.feasible()) {
      std::cout << "FAIL feasibility mismatch, reproducer seed " << instance_seed << "\n";
      return 1;
    }
    if (dp.feasible() && oracle.best.feasible()) {
      ++feasible;
      // Under matching rules the two must agree; against the unconstrained
      // search the solver may only lose ground, never gain.
      const double gap = dp.distortion - oracle.best.distortion;
      max_gap = std::max(max_gap, no_coverage ? gap : std::abs(gap));
      if (no_coverage ? gap < -1e-9 : std::abs(gap) > 1e-9) {
        std::cout << "FAIL gap " << gap << ", reproducer seed " << instance_seed << "\n";
        return 1;
      }
    }
  }
  std::cout << "PASS " << instances << " instances (" << feasible << " feasible), max gap "
            << csv::number(max_gap) << (no_coverage ? " vs unconstrained search" : "")
            << "\n";
  return kExitOk;
}

int cmd_trace_convert(const std::string& in_path, const std::string& format,
                      const std::string& time_key, const std::string& speed_key,
                      const std::string& speed_unit, const std::string& out_path) {
  using namespace mvstream;
  std::ifstream in(in_path);
  if (!in) throw ConfigError("cannot open input: " + in_path);
  std::ostringstream buf;
  buf << in.rdbuf();

  double to_kbps = 1.0;
  if (speed_unit == "bps") {
    to_kbps = 1e-3;
  } else if (speed_unit == "kbps") {
    to_kbps = 1.0;
  } else if (speed_unit == "Mbps") {
    to_kbps = 1e3;
  } else if (speed_unit == "Bps") {
    to_kbps = 8e-3;
  } else {
    throw ConfigError("--speed-unit: expected bps|kbps|Mbps|Bps");
  }

  std::vector<BandwidthTrace::Point> points;
  if (format == "neubot-json") {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("input parse error: ") + e.what());
    }
    if (!j.is_array()) throw ConfigError("neubot-json input must be an array of records");
    for (const auto& rec : j) {
      points.push_back(
          {rec.at(time_key).get<double>(), rec.at(speed_key).get<double>() * to_kbps});
    }
  } else if (format == "csv") {
    std::istringstream lines(buf.str());
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ConfigError("malformed CSV row: " + line);
      points.push_back(
          {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)) * to_kbps});
    }
  } else {
    throw ConfigError("--format: expected neubot-json|csv");
  }
  if (points.empty()) throw ConfigError("input holds no samples");

  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.t_seconds < b.t_seconds; });
  const double t0 = points.front().t_seconds;
  for (auto& p : points) p.t_seconds -= t0;

  std::ostringstream out;
  out << "t_seconds,throughput_kbps\n";
  for (const auto& p : points) {
    out << mvstream::csv::number(p.t_seconds) << ',' << mvstream::csv::number(p.kbps) << '\n';
  }
  write_output(out_path, out.str());
  std::cerr << "wrote " << points.size() << " samples\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiview streaming representation-selection and session simulator"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_path;
  int workers = 1;
  app.add_option("--seed", seed, "master seed for stochastic components")->capture_default_str();
  app.add_option("--out", out_path, "output file or directory (default: stdout)");
  app.add_option("--workers", workers, "concurrent sweep workers")->capture_default_str();
  app.fallthrough();

  // solve
  auto* solve = app.add_subcommand("solve", "pick one download plan for a window and budget");
  std::string set_path, video, window_text = "1:1", algo = "optimal";
  double budget = 0.0, pred_view = 0.0;
  solve->add_option("--set", set_path, "catalog config (JSON)")->required();
  solve->add_option("--video", video, "video profile name")->required();
  solve->add_option("--window", window_text, "navigation window L:R")->required();
  solve->add_option("--budget", budget, "bandwidth budget in kbps")->required();
  solve->add_option("--algo", algo, "optimal|greedy|view|rate|2views")->capture_default_str();
  auto* pred_opt = solve->add_option("--pred-view", pred_view,
                                     "predicted viewpoint (rate adaptation baseline)");

  // session
  auto* session = app.add_subcommand("session", "replay one streaming session");
  mvstream::SessionConfig config;
  std::string channel_kind = "markov", trace_path, nav_kind = "uniform", prediction = "ewma";
  std::string session_window;
  double channel_kbps = 5000.0, p_c = 0.5, p_stay = 1.0 / 3.0, start_view = 1.0, rho = 0.25;
  session->add_option("--set", set_path, "catalog config (JSON)")->required();
  session->add_option("--video", video, "video profile name")->required();
  session->add_option("--algo", algo, "optimal|greedy|view|rate|2views")
      ->capture_default_str();
  session->add_option("--segments", config.num_segments, "segments to stream")
      ->capture_default_str();
  session->add_option("--channel", channel_kind, "constant|markov|trace")
      ->capture_default_str();
  session->add_option("--kbps", channel_kbps, "constant channel rate")->capture_default_str();
  session->add_option("--p-c", p_c, "markov state-change probability")->capture_default_str();
  session->add_option("--trace", trace_path, "trace CSV (t_seconds,throughput_kbps)");
  session->add_option("--nav", nav_kind, "fixed|uniform|nonuniform")->capture_default_str();
  session->add_option("--p-stay", p_stay, "nonuniform stay probability")
      ->capture_default_str();
  session->add_option("--start-view", start_view, "initial viewpoint")->capture_default_str();
  session->add_option("--rho", rho, "navigation speed, views per second")
      ->capture_default_str();
  session->add_option("--window", session_window, "pin a fixed window L:R");
  session->add_option("--tau", config.tau, "segment duration, seconds")->capture_default_str();
  session->add_option("--lookahead", config.lookahead, "segments of download lookahead")
      ->capture_default_str();
  session->add_option("--kappa", config.kappa, "request pacing gain")->capture_default_str();
  session->add_option("--b0", config.buffer_reference_s, "buffer reference, seconds")
      ->capture_default_str();
  session->add_option("--prediction", prediction, "exact|ewma")->capture_default_str();
  session->add_option("--alpha-tcp", config.alpha_tcp, "drift smoothing factor")
      ->capture_default_str();
  session->add_option("--beta-tcp", config.beta_tcp, "level smoothing factor")
      ->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run an experiment grid from a spec file");
  std::string spec_path;
  bool no_per_run = false;
  sweep->add_option("--spec", spec_path, "experiment spec (JSON)")->required();
  sweep->add_flag("--no-per-run", no_per_run, "skip per-run session CSVs");
  auto* sweep_seed_opt = sweep->add_option("--override-seed", seed, "replace the spec seed");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exhaustive search or randomized solver check");
  int check_instances = 0;
  bool no_coverage = false;
  oracle->add_option("--set", set_path, "catalog config (JSON)");
  oracle->add_option("--video", video, "video profile name");
  oracle->add_option("--window", window_text, "navigation window L:R");
  oracle->add_option("--budget", budget, "bandwidth budget in kbps");
  oracle->add_flag("--no-coverage", no_coverage,
                   "admit plans that do not span the window (one-sided edges)");
  oracle->add_option("--check", check_instances,
                     "randomized corpus size for the solver cross-check");

  // trace-convert
  auto* convert = app.add_subcommand("trace-convert", "normalize throughput logs to trace CSV");
  std::string in_path, format = "neubot-json", time_key = "timestamp",
              speed_key = "download_speed", speed_unit = "bps";
  convert->add_option("--in", in_path, "input file")->required();
  convert->add_option("--format", format, "neubot-json|csv")->capture_default_str();
  convert->add_option("--time-key", time_key, "JSON key holding the timestamp")
      ->capture_default_str();
  convert->add_option("--speed-key", speed_key, "JSON key holding the throughput")
      ->capture_default_str();
  convert->add_option("--speed-unit", speed_unit, "bps|Bps|kbps|Mbps")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(set_path, video, window_text, budget, algo, pred_view,
                       pred_opt->count() > 0, out_path);
    }
    if (session->parsed()) {
      config.algo = mvstream::parse_algo(algo);
      config.seed = seed;
      if (prediction == "exact") {
        config.prediction = mvstream::PredictionMode::exact;
      } else if (prediction == "ewma") {
        config.prediction = mvstream::PredictionMode::ewma;
      } else {
        throw mvstream::ConfigError("--prediction: expected exact|ewma");
      }
      mvstream::ChannelSpec channel;
      if (channel_kind == "constant") {
        channel.kind = mvstream::ChannelSpec::Kind::constant;
        channel.constant_kbps = channel_kbps;
      } else if (channel_kind == "markov") {
        channel.kind = mvstream::ChannelSpec::Kind::markov;
        channel.activity = p_c;
      } else if (channel_kind == "trace") {
        channel.kind = mvstream::ChannelSpec::Kind::trace;
        if (trace_path.empty()) throw mvstream::ConfigError("--trace required");
        channel.trace_path = trace_path;
      } else {
        throw mvstream::ConfigError("--channel: expected constant|markov|trace");
      }
      mvstream::NavigationModel nav;
      if (nav_kind == "fixed" || nav_kind == "static") {
        nav.kind = mvstream::NavigationKind::fixed;
      } else if (nav_kind == "uniform") {
        nav.kind = mvstream::NavigationKind::uniform;
      } else if (nav_kind == "nonuniform") {
        nav.kind = mvstream::NavigationKind::nonuniform;
      } else {
        throw mvstream::ConfigError("--nav: expected fixed|uniform|nonuniform");
      }
      nav.p_stay = p_stay;
      nav.start_view = start_view;
      nav.rho = rho;
      return cmd_session(set_path, video, config, channel, nav, session_window, out_path);
    }
    if (sweep->parsed()) {
      mvstream::ExperimentSpec spec = mvstream::ExperimentSpec::from_file(spec_path);
      if (sweep_seed_opt->count() > 0) spec.seed = seed;
      if (no_per_run) spec.emit_per_run = false;
      const std::string dir = out_path.empty() ? "sweep_out" : out_path;
      const mvstream::SweepResult result = mvstream::run_sweep(spec, dir, workers);
      std::cout << "cells=" << result.cells << " runs=" << result.runs
                << " files=" << result.files_written.size() << " out=" << dir << "\n";
      if (!result.failures.empty()) {
        std::cout << result.failures.size() << " cell(s) failed:\n";
        for (const auto& f : result.failures) {
          std::cout << "  " << f.cell << ": " << f.error << "\n";
        }
        return kExitPartial;
      }
      return kExitOk;
    }
    if (oracle->parsed()) {
      if (oracle->count("--check") > 0) {
        return cmd_oracle_check(check_instances, seed, no_coverage);
      }
      if (set_path.empty() || video.empty()) {
        throw mvstream::ConfigError("oracle: --set/--video required (or use --check N)");
      }
      return cmd_oracle_single(set_path, video, window_text, budget, no_coverage, out_path);
    }
    if (convert->parsed()) {
      return cmd_trace_convert(in_path, format, time_key, speed_key, speed_unit, out_path);
    }
  } catch (const mvstream::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
