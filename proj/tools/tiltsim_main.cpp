// Batch front end: run the stock experiments or a config file, sweep
// parameter grids, and run the verification oracles.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "tiltsim/config.hpp"
#include "tiltsim/svg.hpp"
#include "tiltsim/verify.hpp"

namespace fs = std::filesystem;
using namespace tiltsim;

namespace {

const char* controller_name(ControllerKind k) {
  switch (k) {
    case ControllerKind::FL3: return "fl3";
    case ControllerKind::Gait: return "gait";
    case ControllerKind::FL4: return "fl4";
  }
  return "?";
}

fs::path default_out_root() {
  if (const char* env = std::getenv("TILTSIM_OUT")) return fs::path(env);
  return fs::path("out");
}

void write_plots(const fs::path& dir, const std::vector<SimRecord>& recs) {
  PlotSpec traj;
  traj.title = "Trajectory";
  traj.x_label = "x";
  traj.y_label = "y";
  traj.equal_aspect = true;
  traj.series.resize(2);
  traj.series[0].label = "vehicle";
  traj.series[1].label = "reference";
  for (const SimRecord& r : recs) {
    traj.series[0].points.push_back(r.state.pos());
    traj.series[1].points.push_back(r.ref_pos);
  }
  write_line_chart(dir / "trajectory.svg", traj);

  PlotSpec err;
  err.title = "Tracking error";
  err.x_label = "t [s]";
  err.y_label = "error";
  err.series = {{"err_x", {}}, {"err_y", {}}};
  for (const SimRecord& r : recs) {
    err.series[0].points.push_back({r.t, r.err.x});
    err.series[1].points.push_back({r.t, r.err.y});
  }
  write_line_chart(dir / "error.svg", err);

  PlotSpec inputs;
  inputs.title = "Input squared";
  inputs.x_label = "t [s]";
  inputs.y_label = "omega^2";
  inputs.series = {{"omega1^2", {}}, {"omega2^2", {}}};
  for (const SimRecord& r : recs) {
    inputs.series[0].points.push_back({r.t, r.omega1_sq});
    inputs.series[1].points.push_back({r.t, r.omega2_sq});
  }
  write_line_chart(dir / "input_squared.svg", inputs);

  PlotSpec dir_plot;
  dir_plot.title = "Thrust direction";
  dir_plot.x_label = "t [s]";
  dir_plot.y_label = "angle [rad]";
  dir_plot.series = {{"mid", {}}, {"upper", {}}, {"lower", {}}, {"to center", {}}};
  for (const SimRecord& r : recs) {
    dir_plot.series[0].points.push_back({r.t, r.dir_mid});
    dir_plot.series[1].points.push_back({r.t, r.dir_upper});
    dir_plot.series[2].points.push_back({r.t, r.dir_lower});
    dir_plot.series[3].points.push_back({r.t, r.dir_center});
  }
  write_line_chart(dir / "direction.svg", dir_plot);
}

RunReport execute_run(const ExperimentConfig& config, const fs::path& out_dir) {
  SimResult result =
      run_simulation(config.sim, config.vehicle, config.gains(), config.circle);

  RunReport report;
  report.controller = controller_name(config.sim.controller);
  report.dt = config.sim.dt;
  report.t_end = config.sim.t_end;
  report.samples = static_cast<long>(result.records.size());
  report.drift = drift_metric(result.records, config.drift);
  report.saturation = detect_saturation(result.events, result.records);
  report.final_error = result.records.back().err;

  if (report.drift.detected && report.drift.onset_time) {
    result.events.push_back({*report.drift.onset_time, EventKind::DriftOnset, -1,
                             report.drift.d_at_settle});
    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
  }

  fs::create_directories(out_dir);
  write_timeseries_csv(out_dir / "timeseries.csv", result.records);
  write_events_json(out_dir / "events.json", result.events);
  write_report_json(out_dir / "report.json", report);
  write_plots(out_dir, result.records);
  return report;
}

void print_summary(const ExperimentConfig& config, const RunReport& report,
                   const fs::path& out_dir) {
  std::cout << config.name << ": " << report.samples << " samples, final error "
            << report.final_error.norm() << "\n";
  const DriftReport& d = report.drift;
  if (d.settled) {
    std::cout << "  settled at " << d.settle_time << " s, drift slope "
              << d.post_settle_slope << ", drift "
              << (d.detected ? "DETECTED" : "not detected") << "\n";
  } else {
    std::cout << "  tracking error never settled below threshold\n";
  }
  for (const ChannelSaturation& ch : report.saturation.channels) {
    if (ch.initially_saturated || ch.event_count > 0) {
      std::cout << "  omega" << ch.channel + 1 << " saturation: ";
      if (ch.initially_saturated) std::cout << "active at start, ";
      if (ch.first_event_time) {
        std::cout << "first onset " << *ch.first_event_time << " s, ";
      }
      std::cout << "active " << ch.fraction_of_samples * 100.0 << "% of samples\n";
    }
  }
  std::cout << "  outputs in " << out_dir.string() << "\n";
}

ExperimentConfig resolve_config(const std::string& preset_name,
                                const std::string& config_path,
                                bool allow_sweep,
                                std::vector<SweepAxis>* sweep_out) {
  ExperimentConfig base;
  if (!preset_name.empty()) base = preset(preset_name);
  if (!config_path.empty()) {
    ParsedConfig parsed = parse_config_file(config_path, base);
    if (!parsed.sweep.empty() && !allow_sweep) {
      throw ConfigError("config contains sweep.* keys; use the sweep command");
    }
    if (sweep_out) *sweep_out = std::move(parsed.sweep);
    base = std::move(parsed.base);
  }
  if (preset_name.empty() && config_path.empty()) {
    throw ConfigError("need --preset or --config");
  }
  base.validate();
  return base;
}

int cmd_simulate(const std::string& preset_name, const std::string& config_path,
                 std::string out_dir) {
  const ExperimentConfig config =
      resolve_config(preset_name, config_path, false, nullptr);
  const fs::path out = out_dir.empty() ? default_out_root() / config.name
                                       : fs::path(out_dir);
  const RunReport report = execute_run(config, out);
  print_summary(config, report, out);
  return 0;
}

std::string sanitize_cell(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int cmd_sweep(const std::string& config_path, std::string out_dir, int jobs) {
  std::vector<SweepAxis> axes;
  const ExperimentConfig base = resolve_config("", config_path, true, &axes);
  const auto cells = sweep_cells(axes);
  const fs::path out = out_dir.empty() ? default_out_root() / base.name
                                       : fs::path(out_dir);
  fs::create_directories(out);

  struct Row {
    std::string params;
    std::string status = "ok";
    std::string metrics = ",,,,";
  };
  std::vector<Row> rows(cells.size());

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      Row& row = rows[i];
      std::string params;
      for (const auto& [k, v] : cells[i]) {
        if (!params.empty()) params += ';';
        params += k + "=" + v;
      }
      row.params = params;
      char cell_name[32];
      std::snprintf(cell_name, sizeof cell_name, "cell_%03zu", i);
      try {
        ExperimentConfig config = base;
        config.name += std::string("/") + cell_name;
        for (const auto& [k, v] : cells[i]) apply_key(config, k, v);
        config.validate();
        const RunReport rep = execute_run(config, out / cell_name);
        std::ostringstream m;
        m.precision(12);
        if (rep.drift.settled) m << rep.drift.settle_time;
        m << ",";
        if (rep.drift.settled) m << rep.drift.post_settle_slope;
        m << "," << (rep.drift.detected ? 1 : 0) << ",";
        double first_sat = std::numeric_limits<double>::infinity();
        for (const auto& ch : rep.saturation.channels) {
          if (ch.initially_saturated) first_sat = 0.0;
          if (ch.first_event_time) first_sat = std::min(first_sat, *ch.first_event_time);
        }
        if (std::isfinite(first_sat)) m << first_sat;
        m << "," << rep.final_error.norm();
        row.metrics = m.str();
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + sanitize_cell(e.what());
      }
    }
  };

  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int n_threads = std::max(1, std::min<int>(jobs > 0 ? jobs : hw,
                                                  static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  std::ofstream summary(out / "summary.csv", std::ios::binary);
  summary << "cell,params,status,settle_time,drift_slope,drift_detected,"
             "first_saturation,final_error_norm\n";
  bool all_ok = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    summary << "cell_" << std::setw(3) << std::setfill('0') << i << ","
            << rows[i].params << "," << rows[i].status << ","
            << (rows[i].status == "ok" ? rows[i].metrics : ",,,,") << "\n";
    if (rows[i].status != "ok") all_ok = false;
  }
  summary.close();

  std::cout << "sweep: " << cells.size() << " cells, summary in "
            << (out / "summary.csv").string() << "\n";
  return all_ok ? 0 : 1;
}

int cmd_verify(bool eq27_verbatim) {
  const std::vector<CheckResult> checks = verify_all(eq27_verbatim);
  bool all = true;
  for (const CheckResult& c : checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << c.detail
              << "\n";
    all = all && c.pass;
  }
  std::cout << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all ? 0 : 1;
}

int cmd_presets() {
  for (const std::string& name : preset_names()) {
    const ExperimentConfig c = preset(name);
    std::cout << name << ": controller=" << controller_name(c.sim.controller)
              << " t_end=" << c.sim.t_end << " dt=" << c.sim.dt
              << " record_stride=" << c.sim.record_stride << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar tilt-thrust vehicle simulation lab"};
  app.require_subcommand(1);

  std::string preset_name, config_path, out_dir;
  int jobs = 0;
  long seed = 0;
  bool eq27 = false;

  CLI::App* sim = app.add_subcommand("simulate", "run one experiment");
  sim->add_option("--preset", preset_name, "stock experiment name");
  sim->add_option("--config", config_path, "config file path");
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--seed", seed,
                  "reserved for future stochastic inputs (currently unused)");

  CLI::App* swp = app.add_subcommand("sweep", "run a parameter grid");
  swp->add_option("--config", config_path, "config file with sweep.* axes")
      ->required();
  swp->add_option("--out", out_dir, "output directory");
  swp->add_option("--jobs", jobs, "max concurrent cells (default: hardware)");
  swp->add_option("--seed", seed,
                  "reserved for future stochastic inputs (currently unused)");

  CLI::App* ver = app.add_subcommand("verify", "run the oracle checks");
  ver->add_flag("--eq27-verbatim", eq27,
                "use the printed tilt column in the fourth-derivative "
                "decomposition (demonstrates the failing check)");

  CLI::App* pre = app.add_subcommand("presets", "list stock experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(preset_name, config_path, out_dir);
    if (swp->parsed()) return cmd_sweep(config_path, out_dir, jobs);
    if (ver->parsed()) return cmd_verify(eq27);
    if (pre->parsed()) return cmd_presets();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
