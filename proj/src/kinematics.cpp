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

#include "optoshape/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "optoshape/error.hpp"

namespace optoshape {

ChainModel ChainModel::defaults(std::size_t n_units) {
  ChainModel c;
  c.units.assign(n_units, UnitGeometry::defaults());
  return c;
}

void ChainModel::validate() const {
  if (units.empty()) throw Error(ErrorKind::kInvalidGeometry, "chain needs at least one unit");
  if (!(unit_height_mm > 0.0) || !(inter_unit_gap_mm >= 0.0) ||
      !std::isfinite(unit_height_mm) || !std::isfinite(inter_unit_gap_mm)) {
    throw Error(ErrorKind::kInvalidGeometry, "unit height must be positive and gap non-negative");
  }
  for (const auto& u : units) u.validate();
}

Transform unit_transform(const OrientationPR& o, double unit_height_mm, double gap_mm) {
  const Mat3 r = rotation_about_x(o.roll_deg) * rotation_about_y(o.pitch_deg);
  Transform t = Transform::Identity();
  t.linear() = r;
  t.translation() = r * Vec3(0.0, 0.0, unit_height_mm + gap_mm);
  return t;
}

OrientationPR extract_pitch_roll(const Mat3& r) {
  const double pitch = std::atan2(r(0, 2), std::hypot(r(1, 2), r(2, 2))) * kRadToDeg;
  if (std::abs(pitch) > kGimbalPitchLimitDeg) {
    std::ostringstream os;
    os << "pitch " << pitch << " deg is too close to the +-90 deg singularity";
    throw Error(ErrorKind::kGimbalLock, os.str());
  }
  const double roll = std::atan2(-r(1, 2), r(2, 2)) * kRadToDeg;
  return {pitch, roll};
}

TipPose compose_chain(const ChainModel& chain, std::span<const OrientationPR> per_unit) {
  if (per_unit.size() != chain.units.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "expected " + std::to_string(chain.units.size()) + " unit orientations, got " +
                    std::to_string(per_unit.size()));
  }
  Transform pose = Transform::Identity();
  for (const auto& o : per_unit) {
    pose = pose * unit_transform(o, chain.unit_height_mm, chain.inter_unit_gap_mm);
  }
  TipPose tip;
  tip.position = pose.translation();
  tip.rotation = pose.linear();
  tip.orientation = extract_pitch_roll(tip.rotation);
  return tip;
}

double percent_error(std::span<const double> estimated, std::span<const double> truth) {
  if (estimated.size() != truth.size()) {
    throw Error(ErrorKind::kLengthMismatch, "traces differ in length");
  }
  if (truth.empty()) throw Error(ErrorKind::kZeroSpan, "empty truth trace");
  const auto [lo, hi] = std::minmax_element(truth.begin(), truth.end());
  const double span = *hi - *lo;
  if (!(span > 0.0)) throw Error(ErrorKind::kZeroSpan, "truth trace is constant");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += std::abs(estimated[i] - truth[i]);
  return 100.0 * (sum / static_cast<double>(truth.size())) / span;
}

std::optional<double> repeatability_std(std::span<const double> errors, int cycles) {
  if (cycles < 1) throw Error(ErrorKind::kInvalidArgument, "cycles must be >= 1");
  const auto n_cycles = static_cast<std::size_t>(cycles);
  if (errors.size() % n_cycles != 0) {
    throw Error(ErrorKind::kLengthMismatch,
                "trace length " + std::to_string(errors.size()) +
                    " is not divisible by " + std::to_string(cycles) + " cycles");
  }
  if (cycles < 2 || errors.empty()) return std::nullopt;
  const std::size_t period = errors.size() / n_cycles;
  double total = 0.0;
  for (std::size_t phase = 0; phase < period; ++phase) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n_cycles; ++c) mean += errors[c * period + phase];
    mean /= static_cast<double>(n_cycles);
    double ss = 0.0;
    for (std::size_t c = 0; c < n_cycles; ++c) {
      const double d = errors[c * period + phase] - mean;
      ss += d * d;
    }
    total += std::sqrt(ss / static_cast<double>(n_cycles - 1));
  }
  return total / static_cast<double>(period);
}

namespace {

AxisErrors axis_errors(const std::vector<double>& est, const std::vector<double>& truth,
                       int cycles) {
  AxisErrors out;
  std::vector<double> err(est.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    err[i] = est[i] - truth[i];
    ss += err[i] * err[i];
    out.max_deg = std::max(out.max_deg, std::abs(err[i]));
  }
  out.rms_deg = est.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(est.size()));
  try {
    out.percent_error = percent_error(est, truth);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kZeroSpan) throw;
  }
  out.repeatability_std_deg = repeatability_std(err, cycles);
  return out;
}

}  // namespace

ErrorReport tip_error_metrics(std::span<const OrientationPR> estimated,
                              std::span<const OrientationPR> truth, int cycles) {
  if (estimated.size() != truth.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "estimated trace has " + std::to_string(estimated.size()) +
                    " samples, truth has " + std::to_string(truth.size()));
  }
  std::vector<double> ep, et, rp, rt;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ep.push_back(estimated[i].pitch_deg);
    et.push_back(truth[i].pitch_deg);
    rp.push_back(estimated[i].roll_deg);
    rt.push_back(truth[i].roll_deg);
  }
  ErrorReport r;
  r.samples = truth.size();
  r.cycles = cycles;
  r.pitch = axis_errors(ep, et, cycles);
  r.roll = axis_errors(rp, rt, cycles);
  return r;
}

}  // namespace optoshape
