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

#include "optoshape/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "optoshape/error.hpp"
#include "optoshape/rng.hpp"

namespace optoshape {
namespace {

void check_distance(double d_mm) {
  if (!(d_mm > 0.0) || !std::isfinite(d_mm)) {
    std::ostringstream os;
    os << "proximity must be positive and finite, got " << d_mm << " mm";
    throw Error(ErrorKind::kNonPositiveDistance, os.str());
  }
}

}  // namespace

void OptoSensorModel::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kInvalidModel, what);
  };
  require(emitted_power > 0.0 && std::isfinite(emitted_power),
          "emitted power must be positive");
  require(aperture_area_mm2 > 0.0 && std::isfinite(aperture_area_mm2),
          "aperture area must be positive");
  require(omega0_mm > 0.0 && std::isfinite(omega0_mm), "omega0 must be positive");
  if (spread_law == SpreadLaw::kAffine) {
    require(kappa >= 0.0 && std::isfinite(kappa), "kappa must be non-negative");
  } else {
    require(rayleigh_mm > 0.0 && std::isfinite(rayleigh_mm),
            "Rayleigh length must be positive");
  }
  require(vcc_volts > 0.0 && std::isfinite(vcc_volts), "supply voltage must be positive");
  require(gain > 0.0 && std::isfinite(gain), "transduction gain must be positive");
  require(r1_ohms > 0.0 && r2_ohms > 0.0, "resistor values must be positive");
  require(std::isfinite(band_mm[0]) && std::isfinite(band_mm[1]) &&
              band_mm[0] < band_mm[1],
          "working band must satisfy lo < hi");
  require(noise_sigma_volts >= 0.0 && std::isfinite(noise_sigma_volts),
          "noise sigma must be non-negative");
}

double beam_radius(double d_mm, const OptoSensorModel& m,
                   std::optional<double> reflector_radius_mm) {
  check_distance(d_mm);
  double path = 2.0 * d_mm;
  if (m.mirror_amplification) {
    if (!reflector_radius_mm || !(*reflector_radius_mm > 0.0)) {
      throw Error(ErrorKind::kInvalidModel,
                  "mirror amplification needs a positive reflector radius");
    }
    path *= 1.0 + d_mm / *reflector_radius_mm;
  }
  switch (m.spread_law) {
    case SpreadLaw::kAffine:
      return m.omega0_mm + m.kappa * path;
    case SpreadLaw::kGaussian: {
      const double q = path / m.rayleigh_mm;
      return m.omega0_mm * std::sqrt(1.0 + q * q);
    }
  }
  return m.omega0_mm;
}

double received_power(double d_mm, const OptoSensorModel& m,
                      std::optional<double> reflector_radius_mm) {
  const double w = beam_radius(d_mm, m, reflector_radius_mm);
  return m.emitted_power * m.aperture_area_mm2 / (std::numbers::pi * w * w);
}

double power_to_voltage(double power, const OptoSensorModel& m) {
  return std::clamp(m.vcc_volts - m.gain * power, 0.0, m.vcc_volts);
}

std::array<double, 2> theoretical_intensities(const UnitGeometry& g,
                                              const OptoSensorModel& m,
                                              const OrientationPR& o) {
  const auto d = sensor_distances(g, o);
  return {received_power(d[0], m, g.reflector_radius_mm),
          received_power(d[1], m, g.reflector_radius_mm)};
}

SensorReading simulate_sensor_pair(const UnitGeometry& g, const OptoSensorModel& m,
                                   const OrientationPR& o, const SeedContext& seed) {
  SensorReading r;
  r.distances_mm = sensor_distances(g, o);
  std::array<double, 2> v{};
  for (std::size_t s = 0; s < 2; ++s) {
    r.power[s] = received_power(r.distances_mm[s], m, g.reflector_radius_mm);
    v[s] = power_to_voltage(r.power[s], m);
    r.band_violation = r.band_violation || !m.in_band(r.distances_mm[s]);
  }
  if (m.noise_sigma_volts > 0.0) {
    Rng rng(derive_seed(seed.base_seed, seed.sample_index));
    for (double& x : v) {
      x = std::clamp(x + rng.gaussian(0.0, m.noise_sigma_volts), 0.0, m.vcc_volts);
    }
  }
  r.volts = {v[0], v[1]};
  return r;
}

}  // namespace optoshape
