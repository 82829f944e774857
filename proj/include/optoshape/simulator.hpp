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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "optoshape/calibration.hpp"
#include "optoshape/geometry.hpp"
#include "optoshape/kinematics.hpp"
#include "optoshape/photonics.hpp"

namespace optoshape {

enum class Axis { kPitch, kRoll };

std::string_view to_string(Axis axis);
Axis axis_from_string(std::string_view name);

/// Pitch-major square grid over [-limit, +limit] in both angles.
struct SweepSpec {
  double limit_deg = 15.0;
  double step_deg = 0.1;

  /// Throws kInvalidSpec unless 0 < step <= limit <= unit_limit_deg.
  void validate(double unit_limit_deg) const;
  /// Grid points per axis; when limit/step is not integral the grid stops
  /// at the last whole step inside the limit on both sides.
  std::size_t points_per_axis() const;
};

/// Cyclic single-axis motion of the whole segment. The segment angle follows
/// a triangle wave 0 -> +A -> 0 -> -A per cycle and is split evenly across
/// the units.
struct ValidationSpec {
  double amplitude_deg = 60.0;
  int cycles = 4;
  int samples_per_cycle = 400;
  Axis axis = Axis::kPitch;

  void validate(std::size_t n_units, double unit_limit_deg) const;
};

std::vector<OrientationPR> generate_sweep(const SweepSpec& spec,
                                          double unit_limit_deg = 15.0);

struct ValidationMotion {
  std::vector<double> segment_deg;
  /// [sample][unit]
  std::vector<std::vector<OrientationPR>> per_unit;
};

ValidationMotion generate_validation_motion(const ValidationSpec& spec, std::size_t n_units,
                                            double unit_limit_deg = 15.0);

/// Disjoint test motion for the intensity demonstration: a Lissajous path
/// at 90% / 80% of `limit_deg` in pitch / roll with 2:3 frequency ratio.
std::vector<OrientationPR> generate_lissajous_motion(double limit_deg, int samples);

struct DatasetSynthesis {
  CalibrationDataset dataset;
  std::size_t band_violations = 0;
};

/// One sample per orientation; sample i draws its noise from (seed, i).
DatasetSynthesis synthesize_dataset(const UnitGeometry& g, const OptoSensorModel& m,
                                    std::span<const OrientationPR> sweep, std::uint64_t seed,
                                    int unit_index = 0);

struct UnitTraceRow {
  std::size_t index = 0;
  int unit = 0;
  OrientationPR truth;
  VoltagePair volts;
  OrientationPR estimate;
};

struct TipTraceRow {
  std::size_t index = 0;
  OrientationPR truth;
  OrientationPR estimate;
};

struct MotionTrace {
  std::vector<UnitTraceRow> unit_rows;  // ordered by (index, unit)
  std::vector<TipTraceRow> tip_rows;    // one per index
};

struct ExperimentConfig {
  ChainModel chain = ChainModel::defaults();
  OptoSensorModel sensor;
  SweepSpec sweep{15.0, 0.5};
  ValidationSpec validation;
  std::vector<Axis> axes = {Axis::kPitch, Axis::kRoll};
  PolyFitOptions fit;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Independent random streams used by an experiment.
std::uint64_t calibration_seed(std::uint64_t seed, int unit);
std::uint64_t validation_seed(std::uint64_t seed, Axis axis);

/// Locks every other unit and sweeps unit `unit` alone.
DatasetSynthesis sweep_unit(const ExperimentConfig& cfg, int unit);

struct UnitCalibrationRun {
  std::vector<PolyCalibration> calibrations;
  std::vector<std::size_t> band_violations;
};

UnitCalibrationRun calibrate_units(const ExperimentConfig& cfg);

struct ValidationRun {
  Axis axis = Axis::kPitch;
  MotionTrace trace;
  ErrorReport report;
  std::size_t band_violations = 0;
};

/// Moves the chain through `cfg.validation` on `axis`, estimates each unit
/// from its simulated voltages and compares composed tip orientations.
ValidationRun run_validation(const ExperimentConfig& cfg,
                             std::span<const PolyCalibration> calibrations, Axis axis);

struct TableRow {
  Axis axis = Axis::kPitch;
  std::optional<double> percent_error;
  double rms_tip_error_deg = 0.0;
  double max_tip_error_deg = 0.0;
  std::optional<double> repeatability_std_deg;
};

struct ExperimentResult {
  std::vector<PolyCalibration> calibrations;
  std::vector<std::size_t> calibration_band_violations;
  std::vector<ValidationRun> runs;
  /// One row per run: the metrics of the axis that run moved.
  std::vector<TableRow> table;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// RMS estimation error of one calibrated unit over held-out random poses,
/// pooled over both axes: sqrt((rms_pitch^2 + rms_roll^2) / 2).
struct UnitAccuracy {
  AxisPair rms_deg;
  double pooled_rms_deg = 0.0;
};

UnitAccuracy evaluate_unit(const UnitGeometry& g, const OptoSensorModel& m,
                           const PolyCalibration& cal, std::size_t samples,
                           std::uint64_t seed);

struct NoiseTuning {
  double noise_sigma_volts = 0.0;
  double achieved_unit_rms_deg = 0.0;
};

/// Bisects the voltage noise so that a unit calibrated and evaluated under
/// that noise shows `target_unit_rms_deg` pooled RMS.
NoiseTuning tune_noise_sigma(const ExperimentConfig& cfg, double target_unit_rms_deg,
                             double tolerance_deg = 0.01);

}  // namespace optoshape
