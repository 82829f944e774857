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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optoshape/geometry.hpp"
#include "optoshape/photonics.hpp"

namespace optoshape {

/// Ground-truth orientation paired with the two sensor signals recorded at
/// it. Signals are volts for sensor calibration, or raw received powers for
/// the linear intensity model.
struct CalibrationSample {
  OrientationPR truth;
  VoltagePair signals;
};

struct CalibrationDataset {
  int unit_index = 0;
  std::vector<CalibrationSample> samples;

  /// Content hash of the unit index and every sample, bit-exact.
  std::string digest() const;
};

/// `k * (i1, i2) = (roll, pitch)`: first row estimates roll, second pitch.
struct LinearCalibration {
  Mat2 k = Mat2::Zero();
  /// RMS of the stacked roll/pitch residuals on the fitted samples, degrees.
  double residual_rms_deg = 0.0;

  OrientationPR apply(const VoltagePair& signals) const;
};

struct AxisPair {
  double pitch = 0.0;
  double roll = 0.0;
};

constexpr std::size_t kPolyTerms = 8;
using PolyCoefficients = std::array<double, kPolyTerms>;

/// Per-unit map from two voltages to pitch (`k`) and roll (`j`).
struct PolyCalibration {
  int unit_index = 0;
  PolyCoefficients k{};
  PolyCoefficients j{};
  AxisPair fit_rms_deg;
  std::string created_from;
};

struct PolyFitOptions {
  /// Divide each basis column by its max-abs before solving.
  bool column_scaling = true;
  /// Tikhonov term on the (scaled) coefficients; 0 is plain least squares.
  /// A positive ridge skips the rank test.
  double ridge = 0.0;
  /// Residual-correction passes applied after the direct solve.
  int refinement_steps = 0;
  /// Minimum ratio of smallest to largest singular value of the scaled
  /// design matrix.
  double rank_tolerance = 1e-10;
};

/// [v1, v2, v1^2, v2^2, v1 v2, v1 v2^2, v2 v1^2, 1]
PolyCoefficients poly_basis(const VoltagePair& v);

LinearCalibration fit_linear(std::span<const CalibrationSample> samples);

PolyCalibration fit_poly(const CalibrationDataset& ds, const PolyFitOptions& opts = {});

/// Applies both maps. Estimates are not clamped to the unit limit.
OrientationPR estimate_orientation(const VoltagePair& v, const PolyCalibration& c);

/// Pearson correlation; nullopt when either series has zero variance or
/// fewer than two samples.
std::optional<double> pearson_correlation(std::span<const double> a,
                                          std::span<const double> b);

struct TheoryDemoResult {
  LinearCalibration calibration;
  std::vector<OrientationPR> actual;
  std::vector<OrientationPR> estimated;
  std::optional<double> pitch_correlation;
  std::optional<double> roll_correlation;
};

/// Fits the 2x2 intensity map on noise-free received powers for `train`
/// and evaluates it on `test`.
TheoryDemoResult run_linear_theory_demo(const UnitGeometry& g, const OptoSensorModel& m,
                                        std::span<const OrientationPR> train,
                                        std::span<const OrientationPR> test);

}  // namespace optoshape
