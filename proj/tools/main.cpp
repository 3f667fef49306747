// Command-line front end: deterministic scenario simulation, filter runs on
// CSV sensor logs, and error scoring against ground truth.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "inekf/config_io.hpp"
#include "inekf/csv_io.hpp"
#include "inekf/errors.hpp"
#include "inekf/eval.hpp"
#include "inekf/pipeline.hpp"
#include "inekf/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitSchema = 4;
constexpr int kExitFilter = 5;
constexpr int kExitNoOverlap = 6;

template <typename F>
int guard(F&& body) {
  try {
    return body();
  } catch (const inekf::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const inekf::SchemaError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kExitSchema;
  } catch (const inekf::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const inekf::NoOverlap& e) {
    std::fprintf(stderr, "no overlap: %s\n", e.what());
    return kExitNoOverlap;
  } catch (const inekf::FilterError& e) {
    std::fprintf(stderr, "filter error: %s\n", e.what());
    return kExitFilter;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw inekf::IoError("cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw inekf::IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

struct SimulateArgs {
  std::string config;
  std::string out;
  int64_t seed = -1;
  unsigned trials = 1;
};

void simulate_one(const inekf::Scenario& sc, const fs::path& dir) {
  const inekf::Trajectory truth = inekf::generate_truth(sc);
  const auto imu = inekf::synthesize_imu(truth, sc.imu_noise, sc.gyro_bias0,
                                         sc.accel_bias0, sc.gravity, sc.seed);
  // Receiver noise draws come from an independent stream.
  const auto gps = inekf::synthesize_gps(truth, sc.gps_sigma_enu, sc.gps_rate_hz,
                                         sc.origin, sc.seed + 1, sc.gps_delay_s);
  inekf::write_state_csv((dir / "truth.csv").string(), truth);
  inekf::write_imu_csv((dir / "imu.csv").string(), imu);
  inekf::write_gps_csv((dir / "gps.csv").string(), gps);

  json m;
  m["scenario"] = inekf::scenario_to_json(sc);
  m["rows"] = {{"truth", truth.size()}, {"imu", imu.size()}, {"gps", gps.size()}};
  m["hashes"] = {{"truth.csv", inekf::hash_file((dir / "truth.csv").string())},
                 {"imu.csv", inekf::hash_file((dir / "imu.csv").string())},
                 {"gps.csv", inekf::hash_file((dir / "gps.csv").string())}};
  write_json(dir / "sim-manifest.json", m);
}

int cmd_simulate(const SimulateArgs& a) {
  inekf::Scenario sc = inekf::load_scenario(a.config);
  if (a.seed >= 0) sc.seed = static_cast<uint64_t>(a.seed);
  const fs::path out = ensure_dir(a.out);
  if (a.trials <= 1) {
    simulate_one(sc, out);
    return 0;
  }
  std::vector<std::future<void>> work;
  work.reserve(a.trials);
  for (unsigned i = 0; i < a.trials; ++i) {
    inekf::Scenario trial = sc;
    trial.seed = sc.seed + i;
    char name[16];
    std::snprintf(name, sizeof(name), "trial_%03u", i);
    const fs::path dir = ensure_dir((out / name).string());
    work.push_back(std::async(std::launch::async,
                              [trial, dir] { simulate_one(trial, dir); }));
  }
  for (auto& w : work) w.get();
  return 0;
}

struct RunArgs {
  std::string imu;
  std::string gps;
  std::string config;
  std::string out;
  int64_t seed = -1;
  std::string gain_mode;
  std::string heading_mode;
  bool audit = false;
  bool heading_debug = false;
};

void write_heading_debug_csv(const fs::path& path,
                             const std::vector<inekf::HeadingDebugRow>& rows) {
  std::ofstream out(path);
  if (!out) throw inekf::IoError("cannot write " + path.string());
  out << "t,yaw_cog_deg,speed,valid\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%d\n", r.t,
                  r.yaw_cog_deg, r.speed, r.valid ? 1 : 0);
    out << line;
  }
}

int cmd_run(const RunArgs& a) {
  inekf::FilterConfig cfg = inekf::load_filter_config(a.config);
  if (a.seed >= 0) cfg.seed = static_cast<uint64_t>(a.seed);
  if (!a.gain_mode.empty()) {
    if (a.gain_mode == "kalman") cfg.gain_mode = inekf::GainMode::kKalman;
    else if (a.gain_mode == "wls") cfg.gain_mode = inekf::GainMode::kWls;
    else throw inekf::ConfigError("--gain-mode: unknown value '" + a.gain_mode + "'");
  }
  if (!a.heading_mode.empty()) {
    if (a.heading_mode == "cog_composed") cfg.heading_mode = inekf::HeadingMode::kCogComposed;
    else if (a.heading_mode == "imu_raw") cfg.heading_mode = inekf::HeadingMode::kImuRaw;
    else throw inekf::ConfigError("--heading-mode: unknown value '" + a.heading_mode + "'");
  }

  const auto imu = inekf::read_imu_csv(a.imu);
  if (imu.size() < 2) {
    throw inekf::SchemaError(a.imu, imu.size() + 1, "need at least two IMU samples");
  }
  const auto gps = inekf::read_gps_csv(a.gps);

  const inekf::GeodeticRunResult res =
      inekf::run_filter_geodetic(imu, gps, cfg, a.audit);

  const fs::path out = ensure_dir(a.out);
  inekf::write_state_csv((out / "estimate.csv").string(), res.run.estimate);
  if (res.origin_set) {
    inekf::write_state_csv((out / "gps_track.csv").string(), res.gps_track);
  }
  if (a.heading_debug) {
    write_heading_debug_csv(out / "heading_debug.csv", res.run.heading_debug);
  }

  json m;
  m["config"] = inekf::filter_config_to_json(cfg);
  m["inputs"] = {{"imu", a.imu}, {"gps", a.gps}};
  m["counters"] = {{"imu_samples", res.run.counters.imu_samples},
                   {"fixes_read", res.run.counters.fixes_read},
                   {"fixes_used", res.run.counters.fixes_used},
                   {"fixes_dropped", res.run.counters.fixes_dropped},
                   {"heading_refs", res.run.counters.heading_refs}};
  if (res.origin_set) {
    m["origin"] = {{"lat_deg", res.origin.lat_deg},
                   {"lon_deg", res.origin.lon_deg},
                   {"alt_m", res.origin.alt_m}};
  }
  m["warnings"] = res.run.warnings;
  m["estimate_hash"] = inekf::hash_file((out / "estimate.csv").string());
  if (a.audit) {
    m["audit"] = {{"steps", res.run.audit.steps},
                  {"max_asymmetry", res.run.audit.max_asymmetry},
                  {"min_eig_ratio", res.run.audit.min_eig_ratio}};
  }
  write_json(out / "run-manifest.json", m);

  for (const auto& w : res.run.warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  return 0;
}

struct EvalArgs {
  std::string estimate;
  std::string truth;
  std::string baseline;
  std::string out;
};

int cmd_eval(const EvalArgs& a) {
  const inekf::Trajectory est = inekf::read_state_csv(a.estimate);
  const inekf::Trajectory truth = inekf::read_state_csv(a.truth);

  std::vector<inekf::ErrorReport> reports{inekf::align_and_score(est, truth)};
  std::vector<std::string> labels{"estimate"};
  if (!a.baseline.empty()) {
    // Baselines are position-only tracks (raw GPS); heading is not scored.
    const inekf::Trajectory base = inekf::read_state_csv(a.baseline);
    reports.push_back(inekf::align_and_score(base, truth, false));
    labels.push_back("baseline");
  }

  const inekf::Comparison cmp = inekf::compare_runs(reports, labels);
  std::fputs(inekf::render_table(cmp).c_str(), stdout);

  if (!a.out.empty()) {
    const fs::path out = ensure_dir(a.out);
    write_json(out / "report.json", inekf::comparison_to_json(cmp));
    inekf::write_error_csv((out / "errors.csv").string(), reports[0].series);
  }
  return 0;
}

struct CompareArgs {
  std::string truth;
  std::vector<std::string> runs;
  std::vector<std::string> labels;
  std::string out;
};

int cmd_compare(const CompareArgs& a) {
  const inekf::Trajectory truth = inekf::read_state_csv(a.truth);
  if (!a.labels.empty() && a.labels.size() != a.runs.size()) {
    throw inekf::ConfigError("--labels must match the number of run files");
  }

  std::vector<inekf::Trajectory> tracks;
  std::vector<inekf::ErrorReport> reports;
  std::vector<std::string> labels;
  for (size_t i = 0; i < a.runs.size(); ++i) {
    tracks.push_back(inekf::read_state_csv(a.runs[i]));
    reports.push_back(inekf::align_and_score(tracks.back(), truth));
    labels.push_back(a.labels.empty() ? fs::path(a.runs[i]).stem().string()
                                      : a.labels[i]);
  }

  const inekf::Comparison cmp = inekf::compare_runs(reports, labels);
  std::string table = inekf::render_table(cmp);
  json j = inekf::comparison_to_json(cmp);

  // Position RMSE between each later track and the first, interpolated onto
  // the first track's timestamps.
  if (tracks.size() > 1) {
    json inter = json::object();
    for (size_t i = 1; i < tracks.size(); ++i) {
      const inekf::ErrorReport r =
          inekf::align_and_score(tracks[0], tracks[i], false);
      inter[labels[i]] = r.pos_rmse;
      table += "inter-track pos RMSE " + labels[0] + " vs " + labels[i] + ": " +
               std::to_string(r.pos_rmse) + " m\n";
    }
    j["inter_track_pos_rmse_vs_" + labels[0]] = inter;
  }

  std::fputs(table.c_str(), stdout);
  if (!a.out.empty()) {
    write_json(ensure_dir(a.out) / "comparison.json", j);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant-filter GPS/IMU navigation: simulate, run, evaluate"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Generate truth.csv, imu.csv, gps.csv for a scenario");
  sim->add_option("--config", sim_args.config, "Scenario JSON (defaults when omitted)");
  sim->add_option("--out", sim_args.out, "Output directory")->required();
  sim->add_option("--seed", sim_args.seed, "Override the scenario seed");
  sim->add_option("--trials", sim_args.trials,
                  "Run N seeded trials concurrently into trial_### subdirs");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Fuse an IMU log with GPS fixes and write the estimate");
  run->add_option("--imu", run_args.imu, "IMU CSV (t,wx,wy,wz,ax,ay,az)")->required();
  run->add_option("--gps", run_args.gps, "GPS CSV (t,lat,lon,alt,sd_e,sd_n,sd_u)")->required();
  run->add_option("--config", run_args.config, "Filter config JSON (defaults when omitted)");
  run->add_option("--out", run_args.out, "Output directory")->required();
  run->add_option("--seed", run_args.seed, "Override the config seed (echoed in the manifest)");
  run->add_option("--gain-mode", run_args.gain_mode, "kalman | wls");
  run->add_option("--heading-mode", run_args.heading_mode, "cog_composed | imu_raw");
  run->add_flag("--audit", run_args.audit, "Per-step covariance health scan into the manifest");
  run->add_flag("--heading-debug", run_args.heading_debug, "Write heading_debug.csv");

  EvalArgs eval_args;
  CLI::App* ev = app.add_subcommand(
      "eval", "Score an estimate (and optional baseline) against truth");
  ev->add_option("--estimate", eval_args.estimate, "Estimate CSV")->required();
  ev->add_option("--truth", eval_args.truth, "Ground-truth CSV")->required();
  ev->add_option("--baseline", eval_args.baseline, "Position-only baseline CSV");
  ev->add_option("--out", eval_args.out, "Write report.json and errors.csv here");

  CompareArgs cmp_args;
  CLI::App* cmp = app.add_subcommand(
      "compare", "Side-by-side reports for several runs plus inter-track RMSE");
  cmp->add_option("--truth", cmp_args.truth, "Ground-truth CSV")->required();
  cmp->add_option("runs", cmp_args.runs, "Estimate CSVs")->required()->expected(1, -1);
  cmp->add_option("--labels", cmp_args.labels, "One label per run file");
  cmp->add_option("--out", cmp_args.out, "Write comparison.json here");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return guard([&] { return cmd_simulate(sim_args); });
  if (run->parsed()) return guard([&] { return cmd_run(run_args); });
  if (ev->parsed()) return guard([&] { return cmd_eval(eval_args); });
  return guard([&] { return cmd_compare(cmp_args); });
}
