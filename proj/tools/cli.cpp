/*
 * Copyright 2026 The optoshape Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>

#include "CLI11.hpp"
#include "optoshape/calibration.hpp"
#include "optoshape/config.hpp"
#include "optoshape/error.hpp"
#include "optoshape/io.hpp"
#include "optoshape/simulator.hpp"

namespace optoshape::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
};

struct SweepOptions {
  int unit = 0;
  bool all_units = false;
  std::optional<double> step;
  std::optional<double> limit;
  std::optional<double> noise_sigma;
};

struct CalibrateOptions {
  std::string data;
};

struct ValidateOptions {
  std::string cal;
  std::string axis = "both";
  std::optional<double> amplitude;
  std::optional<int> cycles;
  std::optional<int> samples_per_cycle;
  std::optional<double> noise_sigma;
};

struct DemoOptions {
  std::string test_motion = "lissajous";
};

struct ReportOptions {
  std::string trace;
  int cycles = 4;
};

ToolkitConfig load(const GlobalOptions& g) {
  ToolkitConfig c = g.config_path.empty() ? ToolkitConfig{} : load_config(g.config_path);
  for (const auto& o : g.overrides) apply_override(c, o);
  if (g.seed) c.seed = *g.seed;
  return c;
}

fs::path output_path(const GlobalOptions& g, const ToolkitConfig& c, const char* fallback) {
  return g.out.empty() ? fs::path(c.output_dir) / fallback : fs::path(g.out);
}

// trace.csv -> trace<suffix>
fs::path sibling(const fs::path& p, const std::string& suffix) {
  fs::path out = p;
  out.replace_filename(p.stem().string() + suffix);
  return out;
}

std::string fixed(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string fixed(const std::optional<double>& x, int digits = 3) {
  return x ? fixed(*x, digits) : std::string("undefined");
}

int cmd_sweep(const GlobalOptions& g, const SweepOptions& o, std::ostream& out) {
  ToolkitConfig c = load(g);
  if (o.step) c.sweep.step_deg = *o.step;
  if (o.limit) c.sweep.limit_deg = *o.limit;
  if (o.noise_sigma) c.sensor_model.noise_sigma_volts = *o.noise_sigma;
  c.validate();
  const ExperimentConfig e = c.experiment();
  if (!o.all_units && (o.unit < 0 || o.unit >= c.chain.n_units)) {
    throw Error(ErrorKind::kInvalidArgument, "unit index " + std::to_string(o.unit) +
                                                 " out of range [0, " +
                                                 std::to_string(c.chain.n_units) + ")");
  }
  std::vector<CalibrationDataset> datasets;
  std::size_t violations = 0;
  const int first = o.all_units ? 0 : o.unit;
  const int last = o.all_units ? c.chain.n_units - 1 : o.unit;
  for (int u = first; u <= last; ++u) {
    DatasetSynthesis syn = sweep_unit(e, u);
    violations += syn.band_violations;
    datasets.push_back(std::move(syn.dataset));
  }
  const fs::path path = output_path(g, c, "dataset.csv");
  write_file_atomic(path, dataset_to_csv(datasets));
  std::size_t samples = 0;
  for (const auto& d : datasets) samples += d.samples.size();
  out << "samples: " << samples << "\n"
      << "band_violations: " << violations << "\n"
      << "wrote: " << path.string() << "\n";
  return 0;
}

int cmd_calibrate(const GlobalOptions& g, const CalibrateOptions& o, std::ostream& out) {
  const ToolkitConfig c = load(g);
  c.validate();
  const auto datasets = parse_dataset_csv(read_file(o.data));
  if (datasets.empty()) {
    throw Error(ErrorKind::kInsufficientSamples, "dataset '" + o.data + "' has no rows");
  }
  std::vector<PolyCalibration> cals;
  for (const auto& ds : datasets) {
    cals.push_back(fit_poly(ds, c.fit));
    out << "unit " << ds.unit_index << ": samples " << ds.samples.size() << ", fit_rms pitch "
        << fixed(cals.back().fit_rms_deg.pitch, 4) << " deg, roll "
        << fixed(cals.back().fit_rms_deg.roll, 4) << " deg\n";
  }
  const fs::path path = output_path(g, c, "calibration.json");
  write_file_atomic(path, dump_json(calibrations_to_json(cals)));
  out << "wrote: " << path.string() << "\n";
  return 0;
}

void print_table(const std::vector<TableRow>& table, std::ostream& out) {
  out << "orientation  %error  rms_tip_error_deg  max_tip_error_deg  repeatability_std_deg\n";
  for (const auto& row : table) {
    char line[160];
    std::snprintf(line, sizeof line, "%-11s  %6s  %17s  %17s  %21s\n",
                  std::string(to_string(row.axis)).c_str(),
                  fixed(row.percent_error, 2).c_str(), fixed(row.rms_tip_error_deg).c_str(),
                  fixed(row.max_tip_error_deg).c_str(),
                  fixed(row.repeatability_std_deg, 4).c_str());
    out << line;
  }
}

int cmd_validate(const GlobalOptions& g, const ValidateOptions& o, std::ostream& out) {
  ToolkitConfig c = load(g);
  if (o.amplitude) c.validation.amplitude_deg = *o.amplitude;
  if (o.cycles) c.validation.cycles = *o.cycles;
  if (o.samples_per_cycle) c.validation.samples_per_cycle = *o.samples_per_cycle;
  if (o.noise_sigma) c.sensor_model.noise_sigma_volts = *o.noise_sigma;
  c.validate();
  ExperimentConfig e = c.experiment();
  if (o.axis == "both") {
    e.axes = {Axis::kPitch, Axis::kRoll};
  } else {
    e.axes = {axis_from_string(o.axis)};
  }

  std::vector<PolyCalibration> cals;
  if (o.cal.empty()) {
    cals = calibrate_units(e).calibrations;
  } else {
    json j;
    try {
      j = json::parse(read_file(o.cal));
    } catch (const json::parse_error& ex) {
      throw Error(ErrorKind::kParse, "calibration '" + o.cal + "': " + ex.what());
    }
    cals = calibrations_from_json(j);
  }

  const fs::path trace_path = output_path(g, c, "trace.csv");
  json runs = json::array();
  std::vector<TableRow> table;
  for (Axis axis : e.axes) {
    const ValidationRun run = run_validation(e, cals, axis);
    const fs::path p = e.axes.size() == 1
                           ? trace_path
                           : sibling(trace_path, "_" + std::string(to_string(axis)) +
                                                     trace_path.extension().string());
    write_file_atomic(p, trace_to_csv(run.trace));
    out << "wrote: " << p.string() << "\n";
    runs.push_back({{"axis", std::string(to_string(axis))},
                    {"trace", p.filename().string()},
                    {"band_violations", run.band_violations},
                    {"report", report_to_json(run.report)}});
    const AxisErrors& moved = axis == Axis::kPitch ? run.report.pitch : run.report.roll;
    table.push_back({axis, moved.percent_error, moved.rms_deg, moved.max_deg,
                     moved.repeatability_std_deg});
  }

  const json report{{"seed", c.seed},
                    {"noise_sigma_volts", c.sensor_model.noise_sigma_volts},
                    {"calibration_source", o.cal.empty() ? "internal" : "file"},
                    {"runs", runs},
                    {"table", table_to_json(table)}};
  const fs::path report_path = sibling(trace_path, ".report.json");
  const fs::path table_path = sibling(trace_path, ".table.csv");
  write_file_atomic(report_path, dump_json(report));
  write_file_atomic(table_path, table_to_csv(table));
  out << "wrote: " << report_path.string() << "\n"
      << "wrote: " << table_path.string() << "\n";
  print_table(table, out);
  return 0;
}

int cmd_demo(const GlobalOptions& g, const DemoOptions& o, std::ostream& out) {
  const ToolkitConfig c = load(g);
  c.validate();
  const UnitGeometry geom = c.geometry.build();
  const auto train = generate_sweep({c.sweep.limit_deg, c.demo.train_step_deg},
                                    geom.rotation_limit_deg);
  std::vector<OrientationPR> test;
  if (o.test_motion == "lissajous") {
    test = generate_lissajous_motion(c.sweep.limit_deg, c.demo.test_samples);
  } else if (o.test_motion == "constant") {
    test.assign(static_cast<std::size_t>(c.demo.test_samples), OrientationPR{5.0, -5.0});
  } else {
    throw Error(ErrorKind::kInvalidArgument,
                "--test-motion must be 'lissajous' or 'constant'");
  }
  const TheoryDemoResult demo = run_linear_theory_demo(geom, c.sensor_model, train, test);

  const fs::path path = output_path(g, c, "demo_fig5.csv");
  write_file_atomic(path, demo_to_csv(demo));
  const json summary{{"train_samples", train.size()},
                     {"test_samples", test.size()},
                     {"k", {{demo.calibration.k(0, 0), demo.calibration.k(0, 1)},
                            {demo.calibration.k(1, 0), demo.calibration.k(1, 1)}}},
                     {"train_residual_rms_deg", demo.calibration.residual_rms_deg},
                     {"pitch_correlation", demo.pitch_correlation
                                               ? json(*demo.pitch_correlation)
                                               : json(nullptr)},
                     {"roll_correlation",
                      demo.roll_correlation ? json(*demo.roll_correlation) : json(nullptr)}};
  const fs::path summary_path = sibling(path, ".summary.json");
  write_file_atomic(summary_path, dump_json(summary));
  out << "wrote: " << path.string() << "\n"
      << "wrote: " << summary_path.string() << "\n"
      << "pitch r: " << fixed(demo.pitch_correlation, 6) << "\n"
      << "roll r: " << fixed(demo.roll_correlation, 6) << "\n";
  return 0;
}

int cmd_report(const GlobalOptions& g, const ReportOptions& o, std::ostream& out) {
  const ParsedTrace trace = parse_trace_csv(read_file(o.trace));
  if (o.cycles < 1) throw Error(ErrorKind::kInvalidArgument, "--cycles must be >= 1");
  const ErrorReport r = tip_error_metrics(trace.tip_estimate, trace.tip_truth, o.cycles);
  const std::string text = dump_json(report_to_json(r));
  if (g.out.empty()) {
    out << text;
  } else {
    write_file_atomic(g.out, text);
    out << "wrote: " << g.out << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optoelectronic convex-reflector shape-sensing simulator", "optoshape"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Base seed for every random stream");
  app.add_option("--out", g.out, "Primary output file");
  app.add_option("--set", g.overrides, "Config override section.key=value (repeatable)");

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "Simulate a calibration sweep to a dataset CSV");
  sweep->add_option("--unit", so.unit, "Unit to sweep");
  sweep->add_flag("--all-units", so.all_units, "Sweep every unit into one file");
  sweep->add_option("--step", so.step, "Grid step in degrees");
  sweep->add_option("--limit", so.limit, "Grid half-width in degrees");
  sweep->add_option("--noise-sigma", so.noise_sigma, "Voltage noise std-dev");

  CalibrateOptions co;
  auto* calibrate = app.add_subcommand("calibrate", "Fit per-unit polynomial maps");
  calibrate->add_option("--data", co.data, "Dataset CSV")->required();

  ValidateOptions vo;
  auto* validate = app.add_subcommand("validate", "Run the cyclic validation motion");
  validate->add_option("--cal", vo.cal, "Calibration JSON (default: calibrate internally)");
  validate->add_option("--axis", vo.axis, "pitch, roll or both")
      ->check(CLI::IsMember({"pitch", "roll", "both"}));
  validate->add_option("--amplitude", vo.amplitude, "Segment amplitude in degrees");
  validate->add_option("--cycles", vo.cycles, "Number of motion cycles");
  validate->add_option("--samples-per-cycle", vo.samples_per_cycle, "Samples per cycle");
  validate->add_option("--noise-sigma", vo.noise_sigma, "Voltage noise std-dev");

  DemoOptions dopt;
  auto* demo = app.add_subcommand("demo-fig5", "Linear intensity-model demonstration");
  demo->add_option("--test-motion", dopt.test_motion, "lissajous or constant");

  ReportOptions ro;
  auto* report = app.add_subcommand("report", "Recompute error metrics from a trace CSV");
  report->add_option("--trace", ro.trace, "Trace CSV")->required();
  report->add_option("--cycles", ro.cycles, "Cycles in the trace");

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(g, so, out);
    if (calibrate->parsed()) return cmd_calibrate(g, co, out);
    if (validate->parsed()) return cmd_validate(g, vo, out);
    if (demo->parsed()) return cmd_demo(g, dopt, out);
    if (report->parsed()) return cmd_report(g, ro, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace optoshape::cli
