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

#include "optoshape/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "optoshape/error.hpp"

namespace optoshape {
namespace {

using nlohmann::json;
using Setter = std::function<void(const json&)>;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::kInvalidConfig, what);
}

// Applies every key of `section` through `setters`; unknown keys fail.
void read_section(const json& section, const std::string& name,
                  const std::map<std::string, Setter>& setters) {
  if (!section.is_object()) config_error("section '" + name + "' must be an object");
  for (const auto& [key, value] : section.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) config_error("unknown key '" + name + "." + key + "'");
    try {
      it->second(value);
    } catch (const json::exception& e) {
      config_error("bad value for '" + name + "." + key + "': " + e.what());
    }
  }
}

template <typename T>
Setter into(T& field) {
  return [&field](const json& v) { field = v.get<T>(); };
}

}  // namespace

UnitGeometry GeometryParams::build() const {
  return UnitGeometry::from_polar(
      sensor_radius_mm, sensor_azimuths_deg,
      Vec3(reflector_center_mm[0], reflector_center_mm[1], reflector_center_mm[2]),
      reflector_radius_mm, rotation_limit_deg);
}

ExperimentConfig ToolkitConfig::experiment() const {
  ExperimentConfig e;
  e.chain.units.assign(static_cast<std::size_t>(std::max(chain.n_units, 0)), geometry.build());
  e.chain.unit_height_mm = chain.unit_height_mm;
  e.chain.inter_unit_gap_mm = chain.inter_unit_gap_mm;
  e.sensor = sensor_model;
  e.sweep = sweep;
  e.validation = validation;
  e.fit = fit;
  e.seed = seed;
  return e;
}

void ToolkitConfig::validate() const {
  if (chain.n_units < 1) config_error("chain.n_units must be >= 1");
  if (!(demo.train_step_deg > 0.0)) config_error("demo.train_step_deg must be positive");
  if (demo.test_samples < 2) config_error("demo.test_samples must be >= 2");
  try {
    experiment().validate();
  } catch (const Error& e) {
    // Sweep and validation settings from the file are configuration errors;
    // geometry and model failures keep their own kind.
    if (e.kind() == ErrorKind::kInvalidSpec) config_error(e.what());
    throw;
  }
}

ToolkitConfig config_from_json(const json& j) {
  ToolkitConfig c;
  if (!j.is_object()) config_error("config root must be an object");

  GeometryParams& g = c.geometry;
  OptoSensorModel& m = c.sensor_model;
  const std::map<std::string, Setter> geometry = {
      {"sensor_radius_mm", into(g.sensor_radius_mm)},
      {"sensor_azimuths_deg", into(g.sensor_azimuths_deg)},
      {"reflector_center_mm", into(g.reflector_center_mm)},
      {"reflector_radius_mm", into(g.reflector_radius_mm)},
      {"rotation_limit_deg", into(g.rotation_limit_deg)},
  };
  const std::map<std::string, Setter> sensor = {
      {"emitted_power", into(m.emitted_power)},
      {"aperture_area_mm2", into(m.aperture_area_mm2)},
      {"spread_law",
       [&m](const json& v) {
         const auto s = v.get<std::string>();
         if (s == "affine") {
           m.spread_law = SpreadLaw::kAffine;
         } else if (s == "gaussian") {
           m.spread_law = SpreadLaw::kGaussian;
         } else {
           config_error("sensor_model.spread_law must be 'affine' or 'gaussian'");
         }
       }},
      {"omega0_mm", into(m.omega0_mm)},
      {"kappa", into(m.kappa)},
      {"rayleigh_mm", into(m.rayleigh_mm)},
      {"mirror_amplification", into(m.mirror_amplification)},
      {"vcc_volts", into(m.vcc_volts)},
      {"gain", into(m.gain)},
      {"r1_ohms", into(m.r1_ohms)},
      {"r2_ohms", into(m.r2_ohms)},
      {"band_mm", into(m.band_mm)},
      {"noise_sigma_volts", into(m.noise_sigma_volts)},
  };
  const std::map<std::string, Setter> sweep = {
      {"limit_deg", into(c.sweep.limit_deg)},
      {"step_deg", into(c.sweep.step_deg)},
  };
  const std::map<std::string, Setter> validation = {
      {"amplitude_deg", into(c.validation.amplitude_deg)},
      {"cycles", into(c.validation.cycles)},
      {"samples_per_cycle", into(c.validation.samples_per_cycle)},
      {"axis",
       [&c](const json& v) {
         try {
           c.validation.axis = axis_from_string(v.get<std::string>());
         } catch (const Error& e) {
           config_error(e.what());
         }
       }},
  };
  const std::map<std::string, Setter> chain = {
      {"n_units", into(c.chain.n_units)},
      {"unit_height_mm", into(c.chain.unit_height_mm)},
      {"inter_unit_gap_mm", into(c.chain.inter_unit_gap_mm)},
  };
  const std::map<std::string, Setter> demo = {
      {"train_step_deg", into(c.demo.train_step_deg)},
      {"test_samples", into(c.demo.test_samples)},
  };
  const std::map<std::string, Setter> fit = {
      {"column_scaling", into(c.fit.column_scaling)},
      {"ridge", into(c.fit.ridge)},
      {"refinement_steps", into(c.fit.refinement_steps)},
      {"rank_tolerance", into(c.fit.rank_tolerance)},
  };

  for (const auto& [key, value] : j.items()) {
    if (key == "geometry") {
      read_section(value, key, geometry);
    } else if (key == "sensor_model") {
      read_section(value, key, sensor);
    } else if (key == "sweep") {
      read_section(value, key, sweep);
    } else if (key == "validation") {
      read_section(value, key, validation);
    } else if (key == "chain") {
      read_section(value, key, chain);
    } else if (key == "demo") {
      read_section(value, key, demo);
    } else if (key == "fit") {
      read_section(value, key, fit);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) config_error("seed must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "output_dir") {
      if (!value.is_string()) config_error("output_dir must be a string");
      c.output_dir = value.get<std::string>();
    } else {
      config_error("unknown section '" + key + "'");
    }
  }
  return c;
}

json config_to_json(const ToolkitConfig& c) {
  const auto& g = c.geometry;
  const auto& m = c.sensor_model;
  return json{
      {"geometry",
       {{"sensor_radius_mm", g.sensor_radius_mm},
        {"sensor_azimuths_deg", g.sensor_azimuths_deg},
        {"reflector_center_mm", g.reflector_center_mm},
        {"reflector_radius_mm", g.reflector_radius_mm},
        {"rotation_limit_deg", g.rotation_limit_deg}}},
      {"sensor_model",
       {{"emitted_power", m.emitted_power},
        {"aperture_area_mm2", m.aperture_area_mm2},
        {"spread_law", m.spread_law == SpreadLaw::kAffine ? "affine" : "gaussian"},
        {"omega0_mm", m.omega0_mm},
        {"kappa", m.kappa},
        {"rayleigh_mm", m.rayleigh_mm},
        {"mirror_amplification", m.mirror_amplification},
        {"vcc_volts", m.vcc_volts},
        {"gain", m.gain},
        {"r1_ohms", m.r1_ohms},
        {"r2_ohms", m.r2_ohms},
        {"band_mm", m.band_mm},
        {"noise_sigma_volts", m.noise_sigma_volts}}},
      {"sweep", {{"limit_deg", c.sweep.limit_deg}, {"step_deg", c.sweep.step_deg}}},
      {"validation",
       {{"amplitude_deg", c.validation.amplitude_deg},
        {"cycles", c.validation.cycles},
        {"samples_per_cycle", c.validation.samples_per_cycle},
        {"axis", std::string(to_string(c.validation.axis))}}},
      {"chain",
       {{"n_units", c.chain.n_units},
        {"unit_height_mm", c.chain.unit_height_mm},
        {"inter_unit_gap_mm", c.chain.inter_unit_gap_mm}}},
      {"demo",
       {{"train_step_deg", c.demo.train_step_deg}, {"test_samples", c.demo.test_samples}}},
      {"fit",
       {{"column_scaling", c.fit.column_scaling},
        {"ridge", c.fit.ridge},
        {"refinement_steps", c.fit.refinement_steps},
        {"rank_tolerance", c.fit.rank_tolerance}}},
      {"seed", c.seed},
      {"output_dir", c.output_dir},
  };
}

ToolkitConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    config_error("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void apply_override(ToolkitConfig& c, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    config_error("override '" + std::string(assignment) + "' must look like section.key=value");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;

  json patch;
  const auto dot = path.find('.');
  if (dot == std::string::npos) {
    patch[path] = value;
  } else {
    patch[path.substr(0, dot)][path.substr(dot + 1)] = value;
  }
  json merged = config_to_json(c);
  merged.merge_patch(patch);
  c = config_from_json(merged);
}

}  // namespace optoshape
