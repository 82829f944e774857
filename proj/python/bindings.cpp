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

#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "optoshape/calibration.hpp"
#include "optoshape/config.hpp"
#include "optoshape/error.hpp"
#include "optoshape/geometry.hpp"
#include "optoshape/io.hpp"
#include "optoshape/kinematics.hpp"
#include "optoshape/photonics.hpp"
#include "optoshape/simulator.hpp"

namespace py = pybind11;
using namespace optoshape;

namespace {

py::dict axis_errors_dict(const AxisErrors& a) {
  py::dict d;
  d["rms_deg"] = a.rms_deg;
  d["max_deg"] = a.max_deg;
  d["percent_error"] = a.percent_error;
  d["repeatability_std_deg"] = a.repeatability_std_deg;
  return d;
}

py::dict report_dict(const ErrorReport& r) {
  py::dict d;
  d["samples"] = r.samples;
  d["cycles"] = r.cycles;
  d["pitch"] = axis_errors_dict(r.pitch);
  d["roll"] = axis_errors_dict(r.roll);
  return d;
}

CalibrationDataset dataset_from(const std::vector<OrientationPR>& truth,
                                const std::vector<VoltagePair>& signals, int unit) {
  if (truth.size() != signals.size()) {
    throw Error(ErrorKind::kLengthMismatch, "truth and signals differ in length");
  }
  CalibrationDataset ds;
  ds.unit_index = unit;
  for (std::size_t i = 0; i < truth.size(); ++i) ds.samples.push_back({truth[i], signals[i]});
  return ds;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shape sensing simulator for optoelectronic convex-reflector joint chains.";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&]() -> py::object {
    return py::exception<Error>(m, "OptoshapeError", PyExc_ValueError);
  });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& cls = error_type.get_stored();
      py::object exc = cls(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      py::set_error(cls, exc);
    }
  });

  py::class_<OrientationPR>(m, "OrientationPR")
      .def(py::init<>())
      .def(py::init([](double pitch, double roll) { return OrientationPR{pitch, roll}; }),
           py::arg("pitch_deg"), py::arg("roll_deg"))
      .def_readwrite("pitch_deg", &OrientationPR::pitch_deg)
      .def_readwrite("roll_deg", &OrientationPR::roll_deg)
      .def(py::self == py::self)
      .def("__repr__", [](const OrientationPR& o) {
        std::ostringstream os;
        os << "OrientationPR(pitch_deg=" << o.pitch_deg << ", roll_deg=" << o.roll_deg << ")";
        return os.str();
      });

  py::class_<VoltagePair>(m, "VoltagePair")
      .def(py::init<>())
      .def(py::init([](double v1, double v2) { return VoltagePair{v1, v2}; }), py::arg("v1"),
           py::arg("v2"))
      .def_readwrite("v1", &VoltagePair::v1)
      .def_readwrite("v2", &VoltagePair::v2)
      .def(py::self == py::self)
      .def("__repr__", [](const VoltagePair& v) {
        std::ostringstream os;
        os << "VoltagePair(v1=" << v.v1 << ", v2=" << v.v2 << ")";
        return os.str();
      });

  py::class_<UnitGeometry>(m, "UnitGeometry")
      .def(py::init<>())
      .def_static("defaults", &UnitGeometry::defaults)
      .def_static("from_polar", &UnitGeometry::from_polar, py::arg("sensor_radius_mm"),
                  py::arg("azimuths_deg"), py::arg("reflector_center_rest"),
                  py::arg("reflector_radius_mm"), py::arg("rotation_limit_deg") = 15.0)
      .def_readwrite("sensor_positions", &UnitGeometry::sensor_positions)
      .def_readwrite("reflector_center_rest", &UnitGeometry::reflector_center_rest)
      .def_readwrite("reflector_radius_mm", &UnitGeometry::reflector_radius_mm)
      .def_readwrite("rotation_limit_deg", &UnitGeometry::rotation_limit_deg)
      .def("validate", &UnitGeometry::validate)
      .def("within_limits", &UnitGeometry::within_limits);

  py::enum_<SpreadLaw>(m, "SpreadLaw")
      .value("AFFINE", SpreadLaw::kAffine)
      .value("GAUSSIAN", SpreadLaw::kGaussian);

  py::class_<OptoSensorModel>(m, "OptoSensorModel")
      .def(py::init<>())
      .def_readwrite("emitted_power", &OptoSensorModel::emitted_power)
      .def_readwrite("aperture_area_mm2", &OptoSensorModel::aperture_area_mm2)
      .def_readwrite("spread_law", &OptoSensorModel::spread_law)
      .def_readwrite("omega0_mm", &OptoSensorModel::omega0_mm)
      .def_readwrite("kappa", &OptoSensorModel::kappa)
      .def_readwrite("rayleigh_mm", &OptoSensorModel::rayleigh_mm)
      .def_readwrite("mirror_amplification", &OptoSensorModel::mirror_amplification)
      .def_readwrite("vcc_volts", &OptoSensorModel::vcc_volts)
      .def_readwrite("gain", &OptoSensorModel::gain)
      .def_readwrite("band_mm", &OptoSensorModel::band_mm)
      .def_readwrite("noise_sigma_volts", &OptoSensorModel::noise_sigma_volts)
      .def("validate", &OptoSensorModel::validate);

  m.def("rotate_reflector_center", &rotate_reflector_center, py::arg("geometry"),
        py::arg("orientation"));
  m.def("sensor_reflector_distance", &sensor_reflector_distance, py::arg("sensor"),
        py::arg("reflector_center"), py::arg("reflector_radius_mm"));
  m.def("sensor_distances", &sensor_distances, py::arg("geometry"), py::arg("orientation"));
  m.def("proximity_jacobian_analytic", &proximity_jacobian_analytic, py::arg("geometry"),
        py::arg("orientation"));
  m.def("condition_number", &condition_number);

  m.def("beam_radius", &beam_radius, py::arg("d_mm"), py::arg("model"),
        py::arg("reflector_radius_mm") = std::nullopt);
  m.def("received_power", &received_power, py::arg("d_mm"), py::arg("model"),
        py::arg("reflector_radius_mm") = std::nullopt);
  m.def("power_to_voltage", &power_to_voltage, py::arg("power"), py::arg("model"));
  m.def(
      "simulate_sensor_pair",
      [](const UnitGeometry& g, const OptoSensorModel& model, const OrientationPR& o,
         std::uint64_t seed, std::uint64_t index) {
        return simulate_sensor_pair(g, model, o, {seed, index}).volts;
      },
      py::arg("geometry"), py::arg("model"), py::arg("orientation"), py::arg("seed") = 0,
      py::arg("sample_index") = 0);

  py::class_<PolyCalibration>(m, "PolyCalibration")
      .def(py::init<>())
      .def_readwrite("unit_index", &PolyCalibration::unit_index)
      .def_readwrite("k", &PolyCalibration::k)
      .def_readwrite("j", &PolyCalibration::j)
      .def_property_readonly("fit_rms_deg",
                             [](const PolyCalibration& c) {
                               return py::make_tuple(c.fit_rms_deg.pitch, c.fit_rms_deg.roll);
                             })
      .def_readwrite("created_from", &PolyCalibration::created_from)
      .def("estimate", [](const PolyCalibration& c, const VoltagePair& v) {
        return estimate_orientation(v, c);
      });

  m.def("poly_basis", &poly_basis);
  m.def(
      "fit_poly",
      [](const std::vector<OrientationPR>& truth, const std::vector<VoltagePair>& signals,
         int unit, bool column_scaling, double ridge) {
        PolyFitOptions opts;
        opts.column_scaling = column_scaling;
        opts.ridge = ridge;
        return fit_poly(dataset_from(truth, signals, unit), opts);
      },
      py::arg("truth"), py::arg("signals"), py::arg("unit") = 0, py::arg("column_scaling") = true,
      py::arg("ridge") = 0.0);
  m.def("estimate_orientation", &estimate_orientation, py::arg("signals"),
        py::arg("calibration"));
  m.def(
      "fit_linear",
      [](const std::vector<OrientationPR>& truth, const std::vector<VoltagePair>& signals) {
        const CalibrationDataset ds = dataset_from(truth, signals, 0);
        return fit_linear(ds.samples).k;
      },
      py::arg("truth"), py::arg("signals"));

  m.def(
      "generate_sweep",
      [](double limit, double step) { return generate_sweep({limit, step}); },
      py::arg("limit_deg") = 15.0, py::arg("step_deg") = 0.5);
  m.def(
      "synthesize_dataset",
      [](const UnitGeometry& g, const OptoSensorModel& model,
         const std::vector<OrientationPR>& sweep, std::uint64_t seed) {
        const DatasetSynthesis s = synthesize_dataset(g, model, sweep, seed);
        std::vector<VoltagePair> out;
        for (const auto& sample : s.dataset.samples) out.push_back(sample.signals);
        return out;
      },
      py::arg("geometry"), py::arg("model"), py::arg("sweep"), py::arg("seed") = 1);

  m.def(
      "compose_chain",
      [](const std::vector<OrientationPR>& per_unit, double unit_height_mm, double gap_mm) {
        ChainModel chain = ChainModel::defaults(per_unit.size());
        chain.unit_height_mm = unit_height_mm;
        chain.inter_unit_gap_mm = gap_mm;
        const TipPose tip = compose_chain(chain, per_unit);
        return py::make_tuple(Vec3(tip.position), tip.orientation);
      },
      py::arg("per_unit"), py::arg("unit_height_mm") = 12.0, py::arg("gap_mm") = 6.0);
  m.def(
      "tip_error_metrics",
      [](const std::vector<OrientationPR>& est, const std::vector<OrientationPR>& truth,
         int cycles) { return report_dict(tip_error_metrics(est, truth, cycles)); },
      py::arg("estimated"), py::arg("truth"), py::arg("cycles") = 1);

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const ToolkitConfig c = config_from_json(
            config_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(config_json));
        c.validate();
        const ExperimentResult r = run_experiment(c.experiment());
        return py::str(dump_json(table_to_json(r.table)));
      },
      py::arg("config_json") = "",
      "Runs calibration and validation; returns the metrics table as JSON text.");

  m.def(
      "cli_main",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "optoshape");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        py::print(out.str(), py::arg("end") = "");
        if (!err.str().empty()) {
          py::print(err.str(), py::arg("end") = "",
                    py::arg("file") = py::module_::import("sys").attr("stderr"));
        }
        return code;
      },
      py::arg("args"));
}
