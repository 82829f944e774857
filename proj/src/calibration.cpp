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

#include "optoshape/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "optoshape/error.hpp"

namespace optoshape {
namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Fnv1a {
 public:
  void add(std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (word >> (8 * i)) & 0xFFu;
      hash_ *= 0x100000001B3ULL;
    }
  }
  void add(double x) { add(std::bit_cast<std::uint64_t>(x)); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

double rms(const Vector& r) {
  return r.size() == 0 ? 0.0 : std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
}

}  // namespace

std::string CalibrationDataset::digest() const {
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(static_cast<std::int64_t>(unit_index)));
  h.add(static_cast<std::uint64_t>(samples.size()));
  for (const auto& s : samples) {
    h.add(s.truth.pitch_deg);
    h.add(s.truth.roll_deg);
    h.add(s.signals.v1);
    h.add(s.signals.v2);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(h.value()));
  return buf;
}

OrientationPR LinearCalibration::apply(const VoltagePair& signals) const {
  const Eigen::Vector2d out = k * Eigen::Vector2d(signals.v1, signals.v2);
  return {out(1), out(0)};
}

PolyCoefficients poly_basis(const VoltagePair& v) {
  const double a = v.v1, b = v.v2;
  return {a, b, a * a, b * b, a * b, a * b * b, b * a * a, 1.0};
}

LinearCalibration fit_linear(std::span<const CalibrationSample> samples) {
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  if (n < 2) {
    throw Error(ErrorKind::kRankDeficient,
                "linear fit needs at least 2 samples, got " + std::to_string(n));
  }
  Matrix a(n, 2);
  Matrix targets(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    a(i, 0) = s.signals.v1;
    a(i, 1) = s.signals.v2;
    targets(i, 0) = s.truth.roll_deg;
    targets(i, 1) = s.truth.pitch_deg;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(1) > 1e-12 * sv(0))) {
    std::ostringstream os;
    os << "signal pairs are collinear (singular values " << sv(0) << ", " << sv(1) << ")";
    throw Error(ErrorKind::kRankDeficient, os.str());
  }
  const Matrix x = svd.solve(targets);  // 2x2, columns per output

  LinearCalibration out;
  out.k = x.transpose();
  const Matrix resid = a * x - targets;
  out.residual_rms_deg = std::sqrt(resid.squaredNorm() / static_cast<double>(resid.size()));
  return out;
}

PolyCalibration fit_poly(const CalibrationDataset& ds, const PolyFitOptions& opts) {
  const Eigen::Index n = static_cast<Eigen::Index>(ds.samples.size());
  constexpr Eigen::Index kTerms = static_cast<Eigen::Index>(kPolyTerms);
  if (n < kTerms) {
    throw Error(ErrorKind::kInsufficientSamples,
                "polynomial fit needs at least 8 samples, got " + std::to_string(n));
  }
  if (opts.ridge < 0.0 || !std::isfinite(opts.ridge)) {
    throw Error(ErrorKind::kInvalidArgument, "ridge must be non-negative");
  }

  Matrix design(n, kTerms);
  Matrix targets(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = ds.samples[static_cast<std::size_t>(i)];
    const auto row = poly_basis(s.signals);
    for (Eigen::Index c = 0; c < kTerms; ++c) design(i, c) = row[static_cast<std::size_t>(c)];
    targets(i, 0) = s.truth.pitch_deg;
    targets(i, 1) = s.truth.roll_deg;
  }
  if (!design.allFinite() || !targets.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "dataset contains non-finite values");
  }

  Vector scale = Vector::Ones(kTerms);
  if (opts.column_scaling) {
    for (Eigen::Index c = 0; c < kTerms; ++c) {
      const double m = design.col(c).cwiseAbs().maxCoeff();
      if (m > 0.0) scale(c) = m;
    }
  }
  const Matrix scaled = design * scale.cwiseInverse().asDiagonal();

  Matrix x;
  if (opts.ridge == 0.0) {
    const Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
    const Matrix r = qr.matrixR().topLeftCorner(kTerms, kTerms).triangularView<Eigen::Upper>();
    const auto sv = Eigen::JacobiSVD<Matrix>(r).singularValues();
    const double smax = sv(0), smin = sv(kTerms - 1);
    if (!(smin >= opts.rank_tolerance * smax) || smax == 0.0) {
      std::ostringstream os;
      os << "design matrix is rank deficient for unit " << ds.unit_index
         << " (condition estimate " << (smin > 0.0 ? smax / smin : INFINITY) << ")";
      throw Error(ErrorKind::kRankDeficient, os.str());
    }
    x = qr.solve(targets);
    for (int step = 0; step < opts.refinement_steps; ++step) {
      x += qr.solve(Matrix(targets - scaled * x));
    }
  } else {
    Matrix normal = scaled.transpose() * scaled;
    normal.diagonal().array() += opts.ridge;
    const Eigen::LDLT<Matrix> ldlt(normal);
    const Matrix rhs = scaled.transpose() * targets;
    x = ldlt.solve(rhs);
    for (int step = 0; step < opts.refinement_steps; ++step) {
      x += ldlt.solve(Matrix(rhs - normal * x));
    }
  }

  PolyCalibration out;
  out.unit_index = ds.unit_index;
  for (Eigen::Index c = 0; c < kTerms; ++c) {
    out.k[static_cast<std::size_t>(c)] = x(c, 0) / scale(c);
    out.j[static_cast<std::size_t>(c)] = x(c, 1) / scale(c);
  }
  if (!std::all_of(out.k.begin(), out.k.end(), [](double v) { return std::isfinite(v); }) ||
      !std::all_of(out.j.begin(), out.j.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorKind::kRankDeficient, "solve produced non-finite coefficients");
  }

  Vector pitch_resid(n), roll_resid(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = ds.samples[static_cast<std::size_t>(i)];
    const OrientationPR est = estimate_orientation(s.signals, out);
    pitch_resid(i) = est.pitch_deg - s.truth.pitch_deg;
    roll_resid(i) = est.roll_deg - s.truth.roll_deg;
  }
  out.fit_rms_deg = {rms(pitch_resid), rms(roll_resid)};
  out.created_from = ds.digest();
  return out;
}

OrientationPR estimate_orientation(const VoltagePair& v, const PolyCalibration& c) {
  const auto basis = poly_basis(v);
  double pitch = 0.0, roll = 0.0;
  for (std::size_t t = 0; t < kPolyTerms; ++t) {
    pitch += c.k[t] * basis[t];
    roll += c.j[t] * basis[t];
  }
  return {pitch, roll};
}

std::optional<double> pearson_correlation(std::span<const double> a,
                                          std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kLengthMismatch, "correlation series differ in length");
  }
  const std::size_t n = a.size();
  if (n < 2) return std::nullopt;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

TheoryDemoResult run_linear_theory_demo(const UnitGeometry& g, const OptoSensorModel& m,
                                        std::span<const OrientationPR> train,
                                        std::span<const OrientationPR> test) {
  auto intensities = [&](const OrientationPR& o) {
    if (!g.within_limits(o)) {
      throw Error(ErrorKind::kInvalidArgument, "demo orientation exceeds the unit limit");
    }
    const auto p = theoretical_intensities(g, m, o);
    return VoltagePair{p[0], p[1]};
  };

  std::vector<CalibrationSample> samples;
  samples.reserve(train.size());
  for (const auto& o : train) samples.push_back({o, intensities(o)});

  TheoryDemoResult out;
  out.calibration = fit_linear(samples);
  out.actual.assign(test.begin(), test.end());
  out.estimated.reserve(test.size());
  std::vector<double> pa, pe, ra, re;
  for (const auto& o : test) {
    const OrientationPR est = out.calibration.apply(intensities(o));
    out.estimated.push_back(est);
    pa.push_back(o.pitch_deg);
    pe.push_back(est.pitch_deg);
    ra.push_back(o.roll_deg);
    re.push_back(est.roll_deg);
  }
  out.pitch_correlation = pearson_correlation(pe, pa);
  out.roll_correlation = pearson_correlation(re, ra);
  return out;
}

}  // namespace optoshape
