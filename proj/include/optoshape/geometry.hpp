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

#include <Eigen/Core>
#include <array>
#include <span>
#include <vector>

namespace optoshape {

/// Cartesian vector in millimeters.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;

constexpr double kDegToRad = 0.017453292519943295769;
constexpr double kRadToDeg = 57.295779513082320877;

/// Orientation of one rotational unit, in degrees. Pitch rotates about the
/// y axis, roll about the x axis.
struct OrientationPR {
  double pitch_deg = 0.0;
  double roll_deg = 0.0;

  friend bool operator==(const OrientationPR&, const OrientationPR&) = default;
};

/// One rotational unit: two sensors on the z = 0 plane around the rotation
/// origin and a spherical reflector whose center is offset from that origin.
struct UnitGeometry {
  std::array<Vec3, 2> sensor_positions;
  Vec3 reflector_center_rest;
  double reflector_radius_mm = 0.0;
  double rotation_limit_deg = 15.0;

  /// Sensors at `sensor_radius_mm` from the origin at the given azimuths
  /// (degrees from +x, counter-clockwise about +z).
  static UnitGeometry from_polar(double sensor_radius_mm,
                                 std::array<double, 2> azimuths_deg,
                                 const Vec3& reflector_center_rest,
                                 double reflector_radius_mm,
                                 double rotation_limit_deg = 15.0);

  /// 9 mm sensor ring at ±30°, s0 = (0.6, 0, 0.8) mm, r_s = 7.5 mm.
  static UnitGeometry defaults();

  /// Throws kInvalidGeometry if an invariant is violated.
  void validate() const;

  bool within_limits(const OrientationPR& o) const noexcept;
};

Mat3 rotation_about_x(double angle_deg);
Mat3 rotation_about_y(double angle_deg);

/// s1 = Rx(roll) * Ry(pitch) * s0.
Vec3 rotate_reflector_center(const UnitGeometry& g, const OrientationPR& o);

/// Gap between a sensor and the reflector surface: |f - s1| - r_s.
/// Throws kNonPositiveProximity if the sensor is inside or on the sphere.
double sensor_reflector_distance(const Vec3& sensor, const Vec3& reflector_center,
                                 double reflector_radius_mm);

/// Both sensor gaps for a unit pose.
std::array<double, 2> sensor_distances(const UnitGeometry& g,
                                       const OrientationPR& o);

struct DistanceSummary {
  double rest_mm = 0.0;  // d0, at (0, 0)
  double min_mm = 0.0;
  double max_mm = 0.0;
};

struct DistanceSweep {
  std::array<std::vector<double>, 2> traces;
  std::array<DistanceSummary, 2> summary;
};

/// Evaluates both sensor gaps over `orientations`. Orientations outside the
/// unit limits raise kInvalidArgument; geometry failures are rethrown with the
/// offending orientation in the message.
DistanceSweep distance_sweep(const UnitGeometry& g,
                             std::span<const OrientationPR> orientations);

struct ProximityJacobian {
  /// Rows: sensors. Columns: (pitch, roll). Units mm per degree.
  Mat2 jacobian;
  /// Ratio of singular values; +inf when the matrix is singular.
  double condition_number = 0.0;
};

/// Central-difference Jacobian of (d1, d2) with respect to (pitch, roll).
ProximityJacobian proximity_jacobian(const UnitGeometry& g,
                                     const OrientationPR& o, double step_deg);

/// Closed-form Jacobian by the chain rule through the rotation and the norm.
Mat2 proximity_jacobian_analytic(const UnitGeometry& g, const OrientationPR& o);

double condition_number(const Mat2& m);

}  // namespace optoshape
