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

#include <Eigen/Geometry>
#include <optional>
#include <span>
#include <vector>

#include "optoshape/geometry.hpp"

namespace optoshape {

/// Serial stack of rigid rotational units. Each joint rotates by
/// Rx(roll) * Ry(pitch) and is followed by a straight link of
/// unit_height + inter_unit_gap along the rotated +z axis.
struct ChainModel {
  std::vector<UnitGeometry> units;
  double unit_height_mm = 12.0;
  double inter_unit_gap_mm = 6.0;

  static ChainModel defaults(std::size_t n_units = 4);

  double link_length_mm() const noexcept { return unit_height_mm + inter_unit_gap_mm; }
  void validate() const;
};

using Transform = Eigen::Isometry3d;

struct TipPose {
  Vec3 position = Vec3::Zero();
  OrientationPR orientation;
  Mat3 rotation = Mat3::Identity();
};

/// Poses with |pitch| above this are treated as gimbal-adjacent.
constexpr double kGimbalPitchLimitDeg = 85.0;

Transform unit_transform(const OrientationPR& o, double unit_height_mm, double gap_mm);

/// Factorizes R ~= Rx(roll) * Ry(pitch) * Rz(twist) and returns (pitch, roll);
/// the twist component is discarded. Throws kGimbalLock near |pitch| = 90.
OrientationPR extract_pitch_roll(const Mat3& r);

TipPose compose_chain(const ChainModel& chain, std::span<const OrientationPR> per_unit);

struct AxisErrors {
  double rms_deg = 0.0;
  double max_deg = 0.0;
  /// 100 * mean|err| / (max - min of truth); absent for a constant truth axis.
  std::optional<double> percent_error;
  /// Mean over phase-aligned samples of the cross-cycle sample std-dev of
  /// the error; absent with fewer than two cycles.
  std::optional<double> repeatability_std_deg;
};

struct ErrorReport {
  AxisErrors pitch;
  AxisErrors roll;
  std::size_t samples = 0;
  int cycles = 1;
};

/// 100 * mean|est - truth| / span(truth). Throws kZeroSpan for constant truth.
double percent_error(std::span<const double> estimated, std::span<const double> truth);

/// Throws kLengthMismatch unless `errors.size()` is a multiple of `cycles`.
std::optional<double> repeatability_std(std::span<const double> errors, int cycles);

ErrorReport tip_error_metrics(std::span<const OrientationPR> estimated,
                              std::span<const OrientationPR> truth, int cycles);

}  // namespace optoshape
