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

// Reference computations used only by tests. Everything here is written
// against plain std::array arithmetic so it shares no code path with the
// library it checks.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

namespace optoshape::oracle {

using V3 = std::array<double, 3>;
using M4 = std::array<std::array<double, 4>, 4>;

inline double rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double deg(double r) { return r * 180.0 / std::numbers::pi; }

inline V3 sub(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline double dot(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const V3& a) { return std::hypot(a[0], a[1], a[2]); }
inline V3 cross(const V3& a, const V3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Rodrigues rotation of v about a unit axis.
inline V3 axis_angle_rotate(const V3& v, const V3& axis, double angle_deg) {
  const double t = rad(angle_deg), c = std::cos(t), s = std::sin(t);
  const V3 kxv = cross(axis, v);
  const double kdv = dot(axis, v);
  V3 out;
  for (int i = 0; i < 3; ++i) out[i] = v[i] * c + kxv[i] * s + axis[i] * kdv * (1.0 - c);
  return out;
}

/// Pitch about world y first, then roll about world x.
inline V3 rotate_pitch_then_roll(const V3& v, double pitch_deg, double roll_deg) {
  return axis_angle_rotate(axis_angle_rotate(v, {0, 1, 0}, pitch_deg), {1, 0, 0}, roll_deg);
}

inline double gap_closed_form(const V3& f, const V3& c, double r) { return norm(sub(f, c)) - r; }

/// Minimum distance from `f` to points sampled on the sphere (c, r): a
/// Fibonacci lattice over the whole sphere, then a second lattice over a
/// small cap around the best coarse sample.
inline double gap_brute_force(const V3& f, const V3& c, double r, std::size_t samples) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  auto point = [&](const V3& dir) {
    return V3{c[0] + r * dir[0], c[1] + r * dir[1], c[2] + r * dir[2]};
  };
  double best = std::numeric_limits<double>::infinity();
  V3 best_dir{0, 0, 1};
  for (std::size_t i = 0; i < samples; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    const V3 dir{rho * std::cos(phi), rho * std::sin(phi), z};
    const double d = norm(sub(f, point(dir)));
    if (d < best) {
      best = d;
      best_dir = dir;
    }
  }
  // Orthonormal frame around the best direction; cap half-angle a few
  // lattice spacings wide.
  const V3 helper = std::abs(best_dir[0]) < 0.9 ? V3{1, 0, 0} : V3{0, 1, 0};
  V3 e1 = cross(best_dir, helper);
  const double n1 = norm(e1);
  for (double& x : e1) x /= n1;
  const V3 e2 = cross(best_dir, e1);
  const double cap = 4.0 * std::sqrt(4.0 * std::numbers::pi / static_cast<double>(samples));
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    const double theta = cap * std::sqrt(u);
    const double phi = golden * static_cast<double>(i);
    const double st = std::sin(theta), ct = std::cos(theta);
    V3 dir;
    for (int k = 0; k < 3; ++k) {
      dir[k] = ct * best_dir[k] + st * (std::cos(phi) * e1[k] + std::sin(phi) * e2[k]);
    }
    best = std::min(best, norm(sub(f, point(dir))));
  }
  return best;
}

inline M4 identity4() {
  M4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

inline M4 mul(const M4& a, const M4& b) {
  M4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

/// Homogeneous joint transform built from axis-angle images of the basis.
inline M4 joint_matrix(double pitch_deg, double roll_deg, double link_mm) {
  M4 m = identity4();
  for (int col = 0; col < 3; ++col) {
    V3 e{0, 0, 0};
    e[col] = 1.0;
    const V3 img = rotate_pitch_then_roll(e, pitch_deg, roll_deg);
    for (int row = 0; row < 3; ++row) m[row][col] = img[row];
  }
  for (int row = 0; row < 3; ++row) m[row][3] = m[row][2] * link_mm;
  return m;
}

/// Solves the normal equations (A^T A) x = A^T y by Gaussian elimination
/// with partial pivoting. `rows` holds A row-major with `cols` columns.
inline std::vector<double> least_squares_normal(const std::vector<std::vector<double>>& rows,
                                                const std::vector<double>& y) {
  const std::size_t n = rows.front().size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i][j] += rows[r][i] * rows[r][j];
      m[i][n] += rows[r][i] * y[r];
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    std::swap(m[col], m[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
  return x;
}

}  // namespace optoshape::oracle
