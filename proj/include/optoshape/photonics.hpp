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

#include "optoshape/geometry.hpp"

namespace optoshape {

enum class SpreadLaw {
  kAffine,    // w = w0 + kappa * d_eff
  kGaussian,  // w = w0 * sqrt(1 + (d_eff / z_R)^2)
};

/// LED/phototransistor pair. Received power follows the Gaussian-beam
/// aperture integral P = P_E * S / (pi w^2); the collector voltage falls
/// as photocurrent rises, modelled as V = clamp(Vcc - G * P, 0, Vcc).
///
/// The resistor values are carried for reference only; their effect is
/// folded into `gain`.
struct OptoSensorModel {
  double emitted_power = 1.0;
  double aperture_area_mm2 = 0.02;
  SpreadLaw spread_law = SpreadLaw::kAffine;
  double omega0_mm = 0.3;
  double kappa = 0.25;
  double rayleigh_mm = 2.0;
  /// Lengthen the optical path by (1 + d / r_s) to mimic convex-mirror spread.
  bool mirror_amplification = false;
  double vcc_volts = 5.0;
  double gain = 300.0;
  double r1_ohms = 680.0;
  double r2_ohms = 10000.0;
  std::array<double, 2> band_mm = {0.5, 3.0};
  double noise_sigma_volts = 0.005;

  /// Throws kInvalidModel if an invariant is violated.
  void validate() const;

  bool in_band(double d_mm) const noexcept {
    return d_mm >= band_mm[0] && d_mm <= band_mm[1];
  }
};

struct VoltagePair {
  double v1 = 0.0;
  double v2 = 0.0;

  friend bool operator==(const VoltagePair&, const VoltagePair&) = default;
};

/// Beam cross-section radius at the detector plane after a round trip over
/// gap `d_mm`. `reflector_radius_mm` is required when mirror amplification
/// is enabled.
double beam_radius(double d_mm, const OptoSensorModel& m,
                   std::optional<double> reflector_radius_mm = std::nullopt);

double received_power(double d_mm, const OptoSensorModel& m,
                      std::optional<double> reflector_radius_mm = std::nullopt);

double power_to_voltage(double power, const OptoSensorModel& m);

/// Identifies one noisy draw: the stream seed plus the sample's position in
/// it. Draws depend only on this pair, never on evaluation order.
struct SeedContext {
  std::uint64_t base_seed = 0;
  std::uint64_t sample_index = 0;
};

struct SensorReading {
  VoltagePair volts;
  std::array<double, 2> distances_mm{};
  std::array<double, 2> power{};
  /// Some gap fell outside the model's working band. Recorded, not fatal.
  bool band_violation = false;
};

/// Noise-free received powers of both sensors for a pose.
std::array<double, 2> theoretical_intensities(const UnitGeometry& g,
                                              const OptoSensorModel& m,
                                              const OrientationPR& o);

SensorReading simulate_sensor_pair(const UnitGeometry& g, const OptoSensorModel& m,
                                   const OrientationPR& o, const SeedContext& seed);

}  // namespace optoshape
