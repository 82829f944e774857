# Copyright 2026 The optoshape Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Shape sensing simulator for optoelectronic convex-reflector joint chains."""

from optoshape._core import (
    OptoSensorModel,
    OptoshapeError,
    OrientationPR,
    PolyCalibration,
    SpreadLaw,
    UnitGeometry,
    VoltagePair,
    beam_radius,
    cli_main,
    compose_chain,
    condition_number,
    estimate_orientation,
    fit_linear,
    fit_poly,
    generate_sweep,
    poly_basis,
    power_to_voltage,
    proximity_jacobian_analytic,
    received_power,
    rotate_reflector_center,
    run_experiment,
    sensor_distances,
    sensor_reflector_distance,
    simulate_sensor_pair,
    synthesize_dataset,
    tip_error_metrics,
)

__version__ = "0.1.0"

__all__ = [
    "OptoSensorModel",
    "OptoshapeError",
    "OrientationPR",
    "PolyCalibration",
    "SpreadLaw",
    "UnitGeometry",
    "VoltagePair",
    "beam_radius",
    "cli_main",
    "compose_chain",
    "condition_number",
    "estimate_orientation",
    "fit_linear",
    "fit_poly",
    "generate_sweep",
    "poly_basis",
    "power_to_voltage",
    "proximity_jacobian_analytic",
    "received_power",
    "rotate_reflector_center",
    "run_experiment",
    "sensor_distances",
    "sensor_reflector_distance",
    "simulate_sensor_pair",
    "synthesize_dataset",
    "tip_error_metrics",
]
