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

#include "optoshape/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "optoshape/error.hpp"
#include "optoshape/rng.hpp"

namespace optoshape {
namespace {

// Allows limit/step ratios such as 15 / 0.1 that are integral in exact
// arithmetic but not in binary floating point.
constexpr double kRatioSlack = 1e-9;

constexpr std::uint64_t kCalibrationStream = 0x43414C00;  // "CAL"
constexpr std::uint64_t kValidationStream = 0x56414C00;   // "VAL"
constexpr std::uint64_t kEvaluationPoses = 0x45564100;
constexpr std::uint64_t kEvaluationNoise = 0x45564E00;

double triangle_wave(double phase) {
  if (phase < 0.25) return 4.0 * phase;
  if (phase < 0.75) return 2.0 - 4.0 * phase;
  return 4.0 * phase - 4.0;
}

double min_unit_limit(const ChainModel& chain) {
  double lim = chain.units.empty() ? 0.0 : chain.units.front().rotation_limit_deg;
  for (const auto& u : chain.units) lim = std::min(lim, u.rotation_limit_deg);
  return lim;
}

const PolyCalibration& calibration_for(std::span<const PolyCalibration> cals, int unit) {
  for (const auto& c : cals) {
    if (c.unit_index == unit) return c;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "no calibration supplied for unit " + std::to_string(unit));
}

template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), stage + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(Axis axis) {
  return axis == Axis::kPitch ? "pitch" : "roll";
}

Axis axis_from_string(std::string_view name) {
  if (name == "pitch") return Axis::kPitch;
  if (name == "roll") return Axis::kRoll;
  throw Error(ErrorKind::kInvalidArgument,
              "axis must be 'pitch' or 'roll', got '" + std::string(name) + "'");
}

void SweepSpec::validate(double unit_limit_deg) const {
  if (!std::isfinite(limit_deg) || !std::isfinite(step_deg) || !(step_deg > 0.0) ||
      step_deg > limit_deg) {
    std::ostringstream os;
    os << "sweep needs 0 < step <= limit (step " << step_deg << ", limit " << limit_deg << ")";
    throw Error(ErrorKind::kInvalidSpec, os.str());
  }
  if (limit_deg > unit_limit_deg + kRatioSlack) {
    std::ostringstream os;
    os << "sweep limit " << limit_deg << " exceeds the unit limit " << unit_limit_deg;
    throw Error(ErrorKind::kInvalidSpec, os.str());
  }
}

std::size_t SweepSpec::points_per_axis() const {
  const auto half = static_cast<std::size_t>(std::floor(limit_deg / step_deg + kRatioSlack));
  return 2 * half + 1;
}

void ValidationSpec::validate(std::size_t n_units, double unit_limit_deg) const {
  if (n_units == 0) throw Error(ErrorKind::kInvalidSpec, "validation needs at least one unit");
  if (cycles < 1) throw Error(ErrorKind::kInvalidSpec, "validation needs at least one cycle");
  if (samples_per_cycle < 1) {
    throw Error(ErrorKind::kInvalidSpec, "validation needs at least one sample per cycle");
  }
  if (!std::isfinite(amplitude_deg) || amplitude_deg < 0.0 ||
      amplitude_deg > static_cast<double>(n_units) * unit_limit_deg + kRatioSlack) {
    std::ostringstream os;
    os << "amplitude " << amplitude_deg << " deg exceeds " << n_units << " units x "
       << unit_limit_deg << " deg";
    throw Error(ErrorKind::kInvalidSpec, os.str());
  }
}

std::vector<OrientationPR> generate_sweep(const SweepSpec& spec, double unit_limit_deg) {
  spec.validate(unit_limit_deg);
  const auto n = spec.points_per_axis();
  const auto half = static_cast<long>(n / 2);
  std::vector<OrientationPR> out;
  out.reserve(n * n);
  for (long p = -half; p <= half; ++p) {
    for (long r = -half; r <= half; ++r) {
      out.push_back({static_cast<double>(p) * spec.step_deg,
                     static_cast<double>(r) * spec.step_deg});
    }
  }
  return out;
}

ValidationMotion generate_validation_motion(const ValidationSpec& spec, std::size_t n_units,
                                            double unit_limit_deg) {
  spec.validate(n_units, unit_limit_deg);
  const auto per_cycle = static_cast<std::size_t>(spec.samples_per_cycle);
  const std::size_t total = per_cycle * static_cast<std::size_t>(spec.cycles);
  ValidationMotion out;
  out.segment_deg.reserve(total);
  out.per_unit.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double phase =
        static_cast<double>(i % per_cycle) / static_cast<double>(per_cycle);
    const double segment = spec.amplitude_deg * triangle_wave(phase);
    const double unit_angle = segment / static_cast<double>(n_units);
    const OrientationPR o = spec.axis == Axis::kPitch ? OrientationPR{unit_angle, 0.0}
                                                      : OrientationPR{0.0, unit_angle};
    out.segment_deg.push_back(segment);
    out.per_unit.emplace_back(n_units, o);
  }
  return out;
}

std::vector<OrientationPR> generate_lissajous_motion(double limit_deg, int samples) {
  if (samples < 1 || !(limit_deg > 0.0)) {
    throw Error(ErrorKind::kInvalidSpec, "demo motion needs samples >= 1 and a positive limit");
  }
  std::vector<OrientationPR> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples);
    out.push_back({0.9 * limit_deg * std::sin(2.0 * std::numbers::pi * (2.0 * t) + 0.3),
                   0.8 * limit_deg * std::sin(2.0 * std::numbers::pi * (3.0 * t))});
  }
  return out;
}

DatasetSynthesis synthesize_dataset(const UnitGeometry& g, const OptoSensorModel& m,
                                    std::span<const OrientationPR> sweep, std::uint64_t seed,
                                    int unit_index) {
  DatasetSynthesis out;
  out.dataset.unit_index = unit_index;
  out.dataset.samples.reserve(sweep.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!g.within_limits(sweep[i])) {
      throw Error(ErrorKind::kInvalidArgument, "sweep orientation exceeds the unit limit");
    }
    const SensorReading r = simulate_sensor_pair(g, m, sweep[i], {seed, i});
    out.dataset.samples.push_back({sweep[i], r.volts});
    if (r.band_violation) ++out.band_violations;
  }
  return out;
}

void ExperimentConfig::validate() const {
  chain.validate();
  sensor.validate();
  const double lim = min_unit_limit(chain);
  sweep.validate(lim);
  validation.validate(chain.units.size(), lim);
  if (axes.empty()) throw Error(ErrorKind::kInvalidSpec, "no validation axes requested");
}

std::uint64_t calibration_seed(std::uint64_t seed, int unit) {
  return derive_seed(seed, kCalibrationStream + static_cast<std::uint64_t>(unit));
}

std::uint64_t validation_seed(std::uint64_t seed, Axis axis) {
  return derive_seed(seed, kValidationStream + (axis == Axis::kPitch ? 0u : 1u));
}

DatasetSynthesis sweep_unit(const ExperimentConfig& cfg, int unit) {
  if (unit < 0 || static_cast<std::size_t>(unit) >= cfg.chain.units.size()) {
    throw Error(ErrorKind::kInvalidArgument, "unit index " + std::to_string(unit) +
                                                 " out of range for a " +
                                                 std::to_string(cfg.chain.units.size()) +
                                                 "-unit chain");
  }
  const UnitGeometry& g = cfg.chain.units[static_cast<std::size_t>(unit)];
  const auto grid = generate_sweep(cfg.sweep, g.rotation_limit_deg);
  return synthesize_dataset(g, cfg.sensor, grid, calibration_seed(cfg.seed, unit), unit);
}

UnitCalibrationRun calibrate_units(const ExperimentConfig& cfg) {
  UnitCalibrationRun out;
  for (std::size_t u = 0; u < cfg.chain.units.size(); ++u) {
    const int unit = static_cast<int>(u);
    in_stage("calibration of unit " + std::to_string(unit), [&] {
      const DatasetSynthesis syn = sweep_unit(cfg, unit);
      out.calibrations.push_back(fit_poly(syn.dataset, cfg.fit));
      out.band_violations.push_back(syn.band_violations);
      return 0;
    });
  }
  return out;
}

ValidationRun run_validation(const ExperimentConfig& cfg,
                             std::span<const PolyCalibration> calibrations, Axis axis) {
  ValidationSpec spec = cfg.validation;
  spec.axis = axis;
  const std::size_t n_units = cfg.chain.units.size();
  const ValidationMotion motion =
      generate_validation_motion(spec, n_units, min_unit_limit(cfg.chain));
  const std::uint64_t seed = validation_seed(cfg.seed, axis);

  std::vector<const PolyCalibration*> cal(n_units);
  for (std::size_t u = 0; u < n_units; ++u) {
    cal[u] = &calibration_for(calibrations, static_cast<int>(u));
  }

  ValidationRun run;
  run.axis = axis;
  run.trace.unit_rows.reserve(motion.per_unit.size() * n_units);
  run.trace.tip_rows.reserve(motion.per_unit.size());
  std::vector<OrientationPR> tip_truth, tip_est;
  std::vector<OrientationPR> estimates(n_units);
  for (std::size_t i = 0; i < motion.per_unit.size(); ++i) {
    const auto& truth = motion.per_unit[i];
    for (std::size_t u = 0; u < n_units; ++u) {
      const SensorReading r =
          simulate_sensor_pair(cfg.chain.units[u], cfg.sensor, truth[u], {seed, i * n_units + u});
      if (r.band_violation) ++run.band_violations;
      estimates[u] = estimate_orientation(r.volts, *cal[u]);
      run.trace.unit_rows.push_back({i, static_cast<int>(u), truth[u], r.volts, estimates[u]});
    }
    const TipPose t = compose_chain(cfg.chain, truth);
    const TipPose e = compose_chain(cfg.chain, estimates);
    run.trace.tip_rows.push_back({i, t.orientation, e.orientation});
    tip_truth.push_back(t.orientation);
    tip_est.push_back(e.orientation);
  }
  run.report = tip_error_metrics(tip_est, tip_truth, spec.cycles);
  return run;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  in_stage("configuration", [&] {
    cfg.validate();
    return 0;
  });
  ExperimentResult out;
  UnitCalibrationRun cal = calibrate_units(cfg);
  out.calibrations = std::move(cal.calibrations);
  out.calibration_band_violations = std::move(cal.band_violations);
  for (Axis axis : cfg.axes) {
    ValidationRun run = in_stage("validation (" + std::string(to_string(axis)) + ")",
                                 [&] { return run_validation(cfg, out.calibrations, axis); });
    const AxisErrors& moved = axis == Axis::kPitch ? run.report.pitch : run.report.roll;
    out.table.push_back({axis, moved.percent_error, moved.rms_deg, moved.max_deg,
                         moved.repeatability_std_deg});
    out.runs.push_back(std::move(run));
  }
  return out;
}

UnitAccuracy evaluate_unit(const UnitGeometry& g, const OptoSensorModel& m,
                           const PolyCalibration& cal, std::size_t samples,
                           std::uint64_t seed) {
  Rng poses(derive_seed(seed, kEvaluationPoses));
  const std::uint64_t noise_seed = derive_seed(seed, kEvaluationNoise);
  const double lim = g.rotation_limit_deg;
  double sp = 0.0, sr = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const OrientationPR truth{poses.uniform(-lim, lim), poses.uniform(-lim, lim)};
    const SensorReading r = simulate_sensor_pair(g, m, truth, {noise_seed, i});
    const OrientationPR est = estimate_orientation(r.volts, cal);
    sp += (est.pitch_deg - truth.pitch_deg) * (est.pitch_deg - truth.pitch_deg);
    sr += (est.roll_deg - truth.roll_deg) * (est.roll_deg - truth.roll_deg);
  }
  UnitAccuracy out;
  if (samples > 0) {
    const auto n = static_cast<double>(samples);
    out.rms_deg = {std::sqrt(sp / n), std::sqrt(sr / n)};
    out.pooled_rms_deg = std::sqrt((sp + sr) / (2.0 * n));
  }
  return out;
}

NoiseTuning tune_noise_sigma(const ExperimentConfig& cfg, double target_unit_rms_deg,
                             double tolerance_deg) {
  cfg.validate();
  constexpr std::size_t kEvalSamples = 2000;
  auto pooled_rms = [&](double sigma) {
    ExperimentConfig trial = cfg;
    trial.sensor.noise_sigma_volts = sigma;
    const DatasetSynthesis syn = sweep_unit(trial, 0);
    const PolyCalibration cal = fit_poly(syn.dataset, trial.fit);
    return evaluate_unit(trial.chain.units[0], trial.sensor, cal, kEvalSamples,
                         derive_seed(cfg.seed, kEvaluationPoses))
        .pooled_rms_deg;
  };

  double lo = 0.0;
  double at_lo = pooled_rms(lo);
  if (at_lo >= target_unit_rms_deg) return {0.0, at_lo};

  double hi = 0.01;
  double at_hi = pooled_rms(hi);
  while (at_hi < target_unit_rms_deg) {
    lo = hi;
    at_lo = at_hi;
    hi *= 2.0;
    if (hi > cfg.sensor.vcc_volts) {
      throw Error(ErrorKind::kInvalidArgument,
                  "target unit RMS is unreachable below the supply voltage");
    }
    at_hi = pooled_rms(hi);
  }
  NoiseTuning best{hi, at_hi};
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double at_mid = pooled_rms(mid);
    if (std::abs(at_mid - target_unit_rms_deg) < std::abs(best.achieved_unit_rms_deg -
                                                           target_unit_rms_deg)) {
      best = {mid, at_mid};
    }
    if (std::abs(at_mid - target_unit_rms_deg) <= tolerance_deg) break;
    (at_mid < target_unit_rms_deg ? lo : hi) = mid;
  }
  return best;
}

}  // namespace optoshape
