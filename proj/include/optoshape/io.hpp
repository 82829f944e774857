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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "optoshape/calibration.hpp"
#include "optoshape/kinematics.hpp"
#include "optoshape/simulator.hpp"

namespace optoshape {

inline constexpr std::string_view kDatasetHeader =
    "index,unit,pitch_true_deg,roll_true_deg,v1_volts,v2_volts";
inline constexpr std::string_view kTraceHeader =
    "index,unit,pitch_true_deg,roll_true_deg,v1_volts,v2_volts,pitch_est_deg,roll_est_deg,"
    "tip_pitch_true_deg,tip_roll_true_deg,tip_pitch_est_deg,tip_roll_est_deg";
inline constexpr std::string_view kDemoHeader = "index,pitch_actual,pitch_est,roll_actual,roll_est";
inline constexpr std::string_view kTableHeader =
    "orientation,percent_error,rms_tip_error_deg,max_tip_error_deg";

/// Shortest text that parses back to the same double.
std::string format_double(double x);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::string dataset_to_csv(const std::vector<CalibrationDataset>& datasets);
/// Groups rows by unit, ordered by unit index. Parse failures report the
/// 1-based line number.
std::vector<CalibrationDataset> parse_dataset_csv(std::string_view text);

std::string trace_to_csv(const MotionTrace& trace);

struct ParsedTrace {
  std::vector<OrientationPR> tip_truth;
  std::vector<OrientationPR> tip_estimate;
};

/// Reads the tip columns, one sample per distinct index.
ParsedTrace parse_trace_csv(std::string_view text);

nlohmann::json calibration_to_json(const PolyCalibration& c);
PolyCalibration calibration_from_json(const nlohmann::json& j);
/// A single object for one unit, an array otherwise.
nlohmann::json calibrations_to_json(const std::vector<PolyCalibration>& cals);
std::vector<PolyCalibration> calibrations_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ErrorReport& r);
nlohmann::json table_to_json(const std::vector<TableRow>& rows);
std::string table_to_csv(const std::vector<TableRow>& rows);

std::string demo_to_csv(const TheoryDemoResult& demo);

/// Pretty-printed with a trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace optoshape
