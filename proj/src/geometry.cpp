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

#include "optoshape/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "optoshape/error.hpp"

namespace optoshape {
namespace {

// Grid orientations like 150 * 0.1 land a few ulps past the limit.
constexpr double kLimitSlackDeg = 1e-9;

std::string describe(const OrientationPR& o) {
  std::ostringstream os;
  os.precision(17);
  os << "(pitch=" << o.pitch_deg << " deg, roll=" << o.roll_deg << " deg)";
  return os.str();
}

// dRx/dangle and dRy/dangle, per radian.
Mat3 rotation_about_x_derivative(double angle_deg) {
  const double a = angle_deg * kDegToRad;
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << 0, 0, 0,
       0, -s, -c,
       0, c, -s;
  return m;
}

Mat3 rotation_about_y_derivative(double angle_deg) {
  const double a = angle_deg * kDegToRad;
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << -s, 0, c,
       0, 0, 0,
       -c, 0, -s;
  return m;
}

}  // namespace

UnitGeometry UnitGeometry::from_polar(double sensor_radius_mm,
                                      std::array<double, 2> azimuths_deg,
                                      const Vec3& reflector_center_rest,
                                      double reflector_radius_mm,
                                      double rotation_limit_deg) {
  UnitGeometry g;
  for (std::size_t i = 0; i < 2; ++i) {
    const double az = azimuths_deg[i] * kDegToRad;
    g.sensor_positions[i] =
        Vec3(sensor_radius_mm * std::cos(az), sensor_radius_mm * std::sin(az), 0.0);
  }
  g.reflector_center_rest = reflector_center_rest;
  g.reflector_radius_mm = reflector_radius_mm;
  g.rotation_limit_deg = rotation_limit_deg;
  return g;
}

UnitGeometry UnitGeometry::defaults() {
  return from_polar(9.0, {30.0, -30.0}, Vec3(0.6, 0.0, 0.8), 7.5, 15.0);
}

void UnitGeometry::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidGeometry, what);
  };
  if (!reflector_center_rest.allFinite()) fail("reflector center is not finite");
  if (!std::isfinite(reflector_radius_mm) || reflector_radius_mm <= 0.0) {
    fail("reflector radius must be positive");
  }
  if (!std::isfinite(rotation_limit_deg) || rotation_limit_deg <= 0.0 ||
      rotation_limit_deg >= 90.0) {
    fail("rotation limit must lie in (0, 90) degrees");
  }
  for (std::size_t i = 0; i < 2; ++i) {
    const Vec3& f = sensor_positions[i];
    if (!f.allFinite()) fail("sensor position is not finite");
    if (f.z() != 0.0) fail("sensor " + std::to_string(i) + " is off the z = 0 plane");
    if ((f - reflector_center_rest).norm() <= reflector_radius_mm) {
      fail("sensor " + std::to_string(i) + " lies inside the reflector sphere");
    }
  }
}

bool UnitGeometry::within_limits(const OrientationPR& o) const noexcept {
  const double lim = rotation_limit_deg + kLimitSlackDeg;
  return std::isfinite(o.pitch_deg) && std::isfinite(o.roll_deg) &&
         std::abs(o.pitch_deg) <= lim && std::abs(o.roll_deg) <= lim;
}

Mat3 rotation_about_x(double angle_deg) {
  const double a = angle_deg * kDegToRad;
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return m;
}

Mat3 rotation_about_y(double angle_deg) {
  const double a = angle_deg * kDegToRad;
  const double c = std::cos(a), s = std::sin(a);
  Mat3 m;
  m << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return m;
}

Vec3 rotate_reflector_center(const UnitGeometry& g, const OrientationPR& o) {
  return rotation_about_x(o.roll_deg) *
         (rotation_about_y(o.pitch_deg) * g.reflector_center_rest);
}

double sensor_reflector_distance(const Vec3& sensor, const Vec3& reflector_center,
                                 double reflector_radius_mm) {
  const double gap = (sensor - reflector_center).norm() - reflector_radius_mm;
  if (!(gap > 0.0)) {
    std::ostringstream os;
    os << "sensor is " << (gap == 0.0 ? "on" : "inside")
       << " the reflector sphere (gap " << gap << " mm)";
    throw Error(ErrorKind::kNonPositiveProximity, os.str());
  }
  return gap;
}

std::array<double, 2> sensor_distances(const UnitGeometry& g,
                                       const OrientationPR& o) {
  const Vec3 s1 = rotate_reflector_center(g, o);
  return {sensor_reflector_distance(g.sensor_positions[0], s1, g.reflector_radius_mm),
          sensor_reflector_distance(g.sensor_positions[1], s1, g.reflector_radius_mm)};
}

DistanceSweep distance_sweep(const UnitGeometry& g,
                             std::span<const OrientationPR> orientations) {
  DistanceSweep out;
  const auto rest = [&] {
    try {
      return sensor_distances(g, OrientationPR{});
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " at " + describe({}));
    }
  }();
  for (std::size_t s = 0; s < 2; ++s) {
    out.traces[s].reserve(orientations.size());
    out.summary[s].rest_mm = rest[s];
    out.summary[s].min_mm = std::numeric_limits<double>::infinity();
    out.summary[s].max_mm = -std::numeric_limits<double>::infinity();
  }
  for (const OrientationPR& o : orientations) {
    if (!g.within_limits(o)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "orientation " + describe(o) + " exceeds the unit limit");
    }
    std::array<double, 2> d;
    try {
      d = sensor_distances(g, o);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " at " + describe(o));
    }
    for (std::size_t s = 0; s < 2; ++s) {
      out.traces[s].push_back(d[s]);
      out.summary[s].min_mm = std::min(out.summary[s].min_mm, d[s]);
      out.summary[s].max_mm = std::max(out.summary[s].max_mm, d[s]);
    }
  }
  if (orientations.empty()) {
    for (auto& s : out.summary) s.min_mm = s.max_mm = s.rest_mm;
  }
  return out;
}

double condition_number(const Mat2& m) {
  Eigen::JacobiSVD<Mat2> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(1) == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / sv(1);
}

ProximityJacobian proximity_jacobian(const UnitGeometry& g,
                                     const OrientationPR& o, double step_deg) {
  if (!(step_deg > 0.0) || !std::isfinite(step_deg)) {
    throw Error(ErrorKind::kInvalidArgument, "jacobian step must be positive");
  }
  const std::array<OrientationPR, 4> probes = {{
      {o.pitch_deg + step_deg, o.roll_deg},
      {o.pitch_deg - step_deg, o.roll_deg},
      {o.pitch_deg, o.roll_deg + step_deg},
      {o.pitch_deg, o.roll_deg - step_deg},
  }};
  for (const auto& p : probes) {
    if (!g.within_limits(p)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "jacobian stencil point " + describe(p) + " exceeds the unit limit");
    }
  }
  const auto dp = sensor_distances(g, probes[0]);
  const auto dm = sensor_distances(g, probes[1]);
  const auto rp = sensor_distances(g, probes[2]);
  const auto rm = sensor_distances(g, probes[3]);

  ProximityJacobian out;
  for (int s = 0; s < 2; ++s) {
    out.jacobian(s, 0) = (dp[s] - dm[s]) / (2.0 * step_deg);
    out.jacobian(s, 1) = (rp[s] - rm[s]) / (2.0 * step_deg);
  }
  out.condition_number = condition_number(out.jacobian);
  return out;
}

Mat2 proximity_jacobian_analytic(const UnitGeometry& g, const OrientationPR& o) {
  const Mat3 rx = rotation_about_x(o.roll_deg);
  const Mat3 ry = rotation_about_y(o.pitch_deg);
  const Vec3& s0 = g.reflector_center_rest;
  const Vec3 s1 = rx * (ry * s0);
  const Vec3 ds1_dpitch = rx * (rotation_about_y_derivative(o.pitch_deg) * s0) * kDegToRad;
  const Vec3 ds1_droll = rotation_about_x_derivative(o.roll_deg) * (ry * s0) * kDegToRad;

  Mat2 jac;
  for (int s = 0; s < 2; ++s) {
    const Vec3 p = g.sensor_positions[s] - s1;
    // Rejects poses with the sensor inside the sphere.
    sensor_reflector_distance(g.sensor_positions[s], s1, g.reflector_radius_mm);
    const Vec3 unit = p / p.norm();
    jac(s, 0) = -unit.dot(ds1_dpitch);
    jac(s, 1) = -unit.dot(ds1_droll);
  }
  return jac;
}

}  // namespace optoshape
