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
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "optoshape/geometry.hpp"
#include "optoshape/photonics.hpp"
#include "optoshape/simulator.hpp"

namespace optoshape {

/// Unit geometry as written in config files: sensors on a ring.
struct GeometryParams {
  double sensor_radius_mm = 9.0;
  std::array<double, 2> sensor_azimuths_deg = {30.0, -30.0};
  std::array<double, 3> reflector_center_mm = {0.6, 0.0, 0.8};
  double reflector_radius_mm = 7.5;
  double rotation_limit_deg = 15.0;

  UnitGeometry build() const;
};

struct ChainParams {
  int n_units = 4;
  double unit_height_mm = 12.0;
  double inter_unit_gap_mm = 6.0;
};

/// Train grid and test motion for the two-sensor intensity demonstration.
struct DemoParams {
  double train_step_deg = 1.0;
  int test_samples = 400;
};

struct ToolkitConfig {
  GeometryParams geometry;
  OptoSensorModel sensor_model;
  SweepSpec sweep{15.0, 0.5};
  ValidationSpec validation;
  ChainParams chain;
  DemoParams demo;
  PolyFitOptions fit;
  std::uint64_t seed = 1;
  std::string output_dir = ".";

  ExperimentConfig experiment() const;
  /// Checks every section against its module invariants.
  void validate() const;
};

/// Sections absent from `j` keep their defaults; unknown keys are rejected
/// with kInvalidConfig.
ToolkitConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ToolkitConfig& c);
ToolkitConfig load_config(const std::filesystem::path& path);

/// Applies `section.key=value` where value is parsed as JSON, falling back
/// to a plain string.
void apply_override(ToolkitConfig& c, std::string_view assignment);

}  // namespace optoshape
