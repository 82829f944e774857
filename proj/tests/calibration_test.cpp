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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "optoshape/error.hpp"
#include "optoshape/rng.hpp"
#include "optoshape/simulator.hpp"
#include "oracles.hpp"

namespace optoshape {
namespace {

OptoSensorModel noiseless() {
  OptoSensorModel m;
  m.noise_sigma_volts = 0.0;
  return m;
}

CalibrationDataset default_dataset(double step = 0.5) {
  const auto grid = generate_sweep({15.0, step});
  return synthesize_dataset(UnitGeometry::defaults(), noiseless(), grid, 1).dataset;
}

// Replaces the truth of every sample with the map defined by (k, j).
CalibrationDataset relabel(CalibrationDataset ds, const PolyCoefficients& k,
                           const PolyCoefficients& j) {
  PolyCalibration c;
  c.k = k;
  c.j = j;
  for (auto& s : ds.samples) s.truth = estimate_orientation(s.signals, c);
  return ds;
}

PolyCoefficients random_coefficients(Rng& rng, double magnitude) {
  PolyCoefficients c{};
  for (double& x : c) x = rng.uniform(-magnitude, magnitude);
  return c;
}

TEST(PolyBasisTest, Examples) {
  EXPECT_EQ(poly_basis({0, 0}), (PolyCoefficients{0, 0, 0, 0, 0, 0, 0, 1}));
  EXPECT_EQ(poly_basis({1, 1}), (PolyCoefficients{1, 1, 1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(poly_basis({2, 3}), (PolyCoefficients{2, 3, 4, 9, 6, 18, 12, 1}));
}

TEST(EstimateTest, ConstantAndPassThrough) {
  PolyCalibration c;
  c.k[7] = 4.5;
  EXPECT_DOUBLE_EQ(estimate_orientation({1.7, -2.0}, c).pitch_deg, 4.5);
  EXPECT_DOUBLE_EQ(estimate_orientation({-3.0, 9.0}, c).pitch_deg, 4.5);
  c = {};
  c.k[0] = 1.0;
  EXPECT_DOUBLE_EQ(estimate_orientation({2.25, 9.0}, c).pitch_deg, 2.25);
  EXPECT_DOUBLE_EQ(estimate_orientation({2.25, 9.0}, c).roll_deg, 0.0);
}

TEST(LinearFitTest, RecoversKnownMatrix) {
  Mat2 truth;
  truth << 120.0, -35.5, 8.25, 64.0;
  Rng rng(1);
  std::vector<CalibrationSample> samples;
  for (int i = 0; i < 50; ++i) {
    const VoltagePair sig{rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
    const Eigen::Vector2d out = truth * Eigen::Vector2d(sig.v1, sig.v2);
    samples.push_back({{out(1), out(0)}, sig});
  }
  const LinearCalibration fit = fit_linear(samples);
  EXPECT_LT((fit.k - truth).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(fit.residual_rms_deg, 1e-9);
}

TEST(LinearFitTest, ZeroTargetsGiveZeroMatrix) {
  const std::vector<CalibrationSample> samples = {
      {{0, 0}, {1, 2}}, {{0, 0}, {3, -1}}, {{0, 0}, {0.5, 0.7}}};
  EXPECT_LT(fit_linear(samples).k.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LinearFitTest, UnderdeterminedOrCollinearIsRankDeficient) {
  const std::vector<CalibrationSample> one = {{{1, 2}, {0.3, 0.4}}};
  const std::vector<CalibrationSample> collinear = {
      {{1, 2}, {1, 2}}, {{2, 3}, {2, 4}}, {{3, 1}, {-0.5, -1}}};
  for (const auto* s : {&one, &collinear}) {
    try {
      fit_linear(*s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kRankDeficient);
    }
  }
}

TEST(PolyFitTest, RecoversKnownCoefficientsAfterScaling) {
  const CalibrationDataset base = default_dataset(1.0);
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto k = random_coefficients(rng, 100.0);
    const auto j = random_coefficients(rng, 100.0);
    const PolyCalibration fit = fit_poly(relabel(base, k, j));
    for (std::size_t t = 0; t < kPolyTerms; ++t) {
      double scale = 0.0;
      for (const auto& s : base.samples) {
        scale = std::max(scale, std::abs(poly_basis(s.signals)[t]));
      }
      EXPECT_NEAR(fit.k[t] * scale, k[t] * scale, 1e-6);
      EXPECT_NEAR(fit.j[t] * scale, j[t] * scale, 1e-6);
    }
  }
}

TEST(PolyFitTest, MatchesNormalEquationOracle) {
  const CalibrationDataset ds = default_dataset(1.0);
  const PolyCalibration fit = fit_poly(ds);
  std::vector<std::vector<double>> rows;
  std::vector<double> pitch, roll;
  for (const auto& s : ds.samples) {
    const auto b = poly_basis(s.signals);
    rows.emplace_back(b.begin(), b.end());
    pitch.push_back(s.truth.pitch_deg);
    roll.push_back(s.truth.roll_deg);
  }
  const auto ok = oracle::least_squares_normal(rows, pitch);
  const auto oj = oracle::least_squares_normal(rows, roll);
  for (const auto& s : ds.samples) {
    const auto b = poly_basis(s.signals);
    double op = 0.0, orl = 0.0;
    for (std::size_t t = 0; t < kPolyTerms; ++t) {
      op += ok[t] * b[t];
      orl += oj[t] * b[t];
    }
    const OrientationPR est = estimate_orientation(s.signals, fit);
    ASSERT_NEAR(est.pitch_deg, op, 1e-6);
    ASSERT_NEAR(est.roll_deg, orl, 1e-6);
  }
}

TEST(PolyFitTest, DegenerateDatasets) {
  CalibrationDataset same;
  for (int i = 0; i < 20; ++i) same.samples.push_back({{1.0 * i, 0.0}, {2.0, 3.0}});
  try {
    fit_poly(same);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRankDeficient);
    EXPECT_NE(std::string(e.what()).find("condition"), std::string::npos);
  }

  CalibrationDataset small = default_dataset(5.0);
  small.samples.resize(7);
  try {
    fit_poly(small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInsufficientSamples);
  }

  PolyFitOptions ridge;
  ridge.ridge = 1e-3;
  EXPECT_NO_THROW(fit_poly(same, ridge));
}

TEST(PolyFitTest, NoiselessDefaultsRoundTripHeldOut) {
  const PolyCalibration fit = fit_poly(default_dataset(0.5));
  EXPECT_LE(fit.fit_rms_deg.pitch, 1.0);
  EXPECT_LE(fit.fit_rms_deg.roll, 1.0);
  const UnitAccuracy acc =
      evaluate_unit(UnitGeometry::defaults(), noiseless(), fit, 2000, 123);
  EXPECT_LE(acc.rms_deg.pitch, 1.0);
  EXPECT_LE(acc.rms_deg.roll, 1.0);
}

TEST(PolyFitTest, TrainingEstimatesReproduceFitRms) {
  const CalibrationDataset ds = default_dataset(1.0);
  const PolyCalibration fit = fit_poly(ds);
  double sp = 0.0, sr = 0.0;
  for (const auto& s : ds.samples) {
    const OrientationPR e = estimate_orientation(s.signals, fit);
    sp += std::pow(e.pitch_deg - s.truth.pitch_deg, 2);
    sr += std::pow(e.roll_deg - s.truth.roll_deg, 2);
  }
  const double n = static_cast<double>(ds.samples.size());
  EXPECT_NEAR(std::sqrt(sp / n), fit.fit_rms_deg.pitch, 1e-12);
  EXPECT_NEAR(std::sqrt(sr / n), fit.fit_rms_deg.roll, 1e-12);
  EXPECT_EQ(fit.created_from, ds.digest());
}

TEST(PolyFitProperty, SampleOrderDoesNotChangePredictions) {
  CalibrationDataset ds = default_dataset(1.0);
  const PolyCalibration a = fit_poly(ds);
  Rng rng(4);
  for (std::size_t i = ds.samples.size() - 1; i > 0; --i) {
    std::swap(ds.samples[i], ds.samples[static_cast<std::size_t>(rng.next_u64() % (i + 1))]);
  }
  const PolyCalibration b = fit_poly(ds);
  for (const auto& s : ds.samples) {
    const auto ea = estimate_orientation(s.signals, a), eb = estimate_orientation(s.signals, b);
    ASSERT_NEAR(ea.pitch_deg, eb.pitch_deg, 1e-9);
    ASSERT_NEAR(ea.roll_deg, eb.roll_deg, 1e-9);
  }
}

TEST(PolyFitProperty, OnSurfaceSampleLeavesCoefficientsUnchanged) {
  CalibrationDataset ds = default_dataset(1.0);
  const PolyCalibration a = fit_poly(ds);
  const VoltagePair extra{2.0, 2.2};
  ds.samples.push_back({estimate_orientation(extra, a), extra});
  const PolyCalibration b = fit_poly(ds);
  for (std::size_t t = 0; t < kPolyTerms; ++t) {
    EXPECT_NEAR(a.k[t], b.k[t], 1e-9 * std::max(1.0, std::abs(a.k[t])));
    EXPECT_NEAR(a.j[t], b.j[t], 1e-9 * std::max(1.0, std::abs(a.j[t])));
  }
}

TEST(PolyFitProperty, BitIdenticalRefits) {
  const CalibrationDataset ds = default_dataset(1.0);
  const PolyCalibration a = fit_poly(ds), b = fit_poly(ds);
  EXPECT_EQ(a.k, b.k);
  EXPECT_EQ(a.j, b.j);
  for (const auto& s : ds.samples) {
    ASSERT_EQ(estimate_orientation(s.signals, a), estimate_orientation(s.signals, b));
  }
}

TEST(PolyFitProperty, ExactDataFitsToMicroDegrees) {
  const CalibrationDataset base = default_dataset(1.0);
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const CalibrationDataset ds =
        relabel(base, random_coefficients(rng, 1e3), random_coefficients(rng, 1e3));
    const PolyCalibration fit = fit_poly(ds);
    for (const auto& s : ds.samples) {
      const OrientationPR e = estimate_orientation(s.signals, fit);
      ASSERT_NEAR(e.pitch_deg, s.truth.pitch_deg, 1e-6);
      ASSERT_NEAR(e.roll_deg, s.truth.roll_deg, 1e-6);
    }
  }
}

TEST(PolyFitProperty, ColumnScalingDoesNotChangePredictions) {
  // Signals spread around 1 V keep the unscaled design well conditioned.
  CalibrationDataset ds;
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    ds.samples.push_back({{rng.uniform(-15, 15), rng.uniform(-15, 15)},
                          {rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5)}});
  }
  PolyFitOptions unscaled;
  unscaled.column_scaling = false;
  const PolyCalibration a = fit_poly(ds), b = fit_poly(ds, unscaled);
  for (const auto& s : ds.samples) {
    const auto ea = estimate_orientation(s.signals, a), eb = estimate_orientation(s.signals, b);
    ASSERT_NEAR(ea.pitch_deg, eb.pitch_deg, 1e-8);
    ASSERT_NEAR(ea.roll_deg, eb.roll_deg, 1e-8);
  }
}

TEST(PolyFitProperty, RefinementKeepsTheMinimizer) {
  const CalibrationDataset ds = default_dataset(1.0);
  PolyFitOptions refine;
  refine.refinement_steps = 3;
  const PolyCalibration a = fit_poly(ds), b = fit_poly(ds, refine);
  for (const auto& s : ds.samples) {
    const auto ea = estimate_orientation(s.signals, a), eb = estimate_orientation(s.signals, b);
    ASSERT_NEAR(ea.pitch_deg, eb.pitch_deg, 1e-9);
    ASSERT_NEAR(ea.roll_deg, eb.roll_deg, 1e-9);
  }
}

TEST(PearsonTest, BasicCases) {
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {2, 4, 6, 8};
  const std::vector<double> c = {8, 6, 4, 2};
  const std::vector<double> flat = {5, 5, 5, 5};
  EXPECT_NEAR(*pearson_correlation(a, b), 1.0, 1e-15);
  EXPECT_NEAR(*pearson_correlation(a, c), -1.0, 1e-15);
  EXPECT_FALSE(pearson_correlation(a, flat).has_value());
}

TEST(TheoryDemoTest, DisjointTestCorrelates) {
  const UnitGeometry g = UnitGeometry::defaults();
  const auto train = generate_sweep({15.0, 1.0});
  const auto test = generate_lissajous_motion(15.0, 400);
  const TheoryDemoResult r = run_linear_theory_demo(g, OptoSensorModel{}, train, test);
  ASSERT_TRUE(r.pitch_correlation && r.roll_correlation);
  EXPECT_GE(*r.pitch_correlation, 0.95);
  EXPECT_GE(*r.roll_correlation, 0.95);
  EXPECT_EQ(r.actual.size(), test.size());
}

TEST(TheoryDemoTest, InSampleDominatesResidual) {
  const UnitGeometry g = UnitGeometry::defaults();
  const auto train = generate_sweep({15.0, 1.0});
  const auto test = generate_lissajous_motion(15.0, 400);
  const TheoryDemoResult in = run_linear_theory_demo(g, OptoSensorModel{}, train, train);
  const TheoryDemoResult out = run_linear_theory_demo(g, OptoSensorModel{}, train, test);
  // Same fitted matrix in both runs; least squares minimizes the in-sample
  // residual, which bounds the train-set correlation from below.
  EXPECT_EQ(in.calibration.k, out.calibration.k);
  EXPECT_GE(*in.pitch_correlation, *out.pitch_correlation - 1e-3);
  EXPECT_GE(*in.roll_correlation, *out.roll_correlation - 1e-3);
}

TEST(TheoryDemoTest, ConstantTestMotionHasUndefinedCorrelation) {
  const auto train = generate_sweep({15.0, 1.0});
  const std::vector<OrientationPR> test(50, OrientationPR{5.0, -5.0});
  const TheoryDemoResult r =
      run_linear_theory_demo(UnitGeometry::defaults(), OptoSensorModel{}, train, test);
  EXPECT_FALSE(r.pitch_correlation.has_value());
  EXPECT_FALSE(r.roll_correlation.has_value());
}

}  // namespace
}  // namespace optoshape
