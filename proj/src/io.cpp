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

#include "optoshape/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "optoshape/error.hpp"

namespace optoshape {
namespace {

using nlohmann::json;

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Lines without their terminators, paired with 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 1;
  for (std::string_view line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(number++, line);
  }
  while (!out.empty() && out.back().second.empty()) out.pop_back();
  return out;
}

double parse_double(std::string_view field, std::size_t line, std::string_view column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    parse_error(line, "column '" + std::string(column) + "' is not a finite number: '" +
                          std::string(field) + "'");
  }
  return v;
}

long long parse_int(std::string_view field, std::size_t line, std::string_view column) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || v < 0) {
    parse_error(line, "column '" + std::string(column) + "' is not a non-negative integer: '" +
                          std::string(field) + "'");
  }
  return v;
}

using Rows = std::vector<std::pair<std::size_t, std::vector<std::string_view>>>;

Rows read_table(std::string_view text, std::string_view header) {
  const auto lines = lines_of(text);
  if (lines.empty()) parse_error(1, "file is empty");
  if (lines.front().second != header) {
    parse_error(1, "unexpected header; expected '" + std::string(header) + "'");
  }
  const std::size_t width = split(header, ',').size();
  Rows rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, line] = lines[i];
    auto fields = split(line, ',');
    if (fields.size() != width) {
      parse_error(number, "expected " + std::to_string(width) + " fields, found " +
                              std::to_string(fields.size()));
    }
    rows.emplace_back(number, std::move(fields));
  }
  return rows;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json axis_errors_to_json(const AxisErrors& a) {
  return json{{"rms_deg", a.rms_deg},
              {"max_deg", a.max_deg},
              {"percent_error", optional_number(a.percent_error)},
              {"repeatability_std_deg", optional_number(a.repeatability_std_deg)}};
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::kInvalidArgument, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::kInvalidArgument,
                "cannot move output into '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dataset_to_csv(const std::vector<CalibrationDataset>& datasets) {
  std::string out(kDatasetHeader);
  out += '\n';
  std::size_t index = 0;
  for (const auto& ds : datasets) {
    for (const auto& s : ds.samples) {
      out += std::to_string(index++) + ',' + std::to_string(ds.unit_index) + ',' +
             format_double(s.truth.pitch_deg) + ',' + format_double(s.truth.roll_deg) + ',' +
             format_double(s.signals.v1) + ',' + format_double(s.signals.v2) + '\n';
    }
  }
  return out;
}

std::vector<CalibrationDataset> parse_dataset_csv(std::string_view text) {
  const auto cols = split(kDatasetHeader, ',');
  std::map<int, CalibrationDataset> by_unit;
  for (const auto& [line, f] : read_table(text, kDatasetHeader)) {
    parse_int(f[0], line, cols[0]);
    const auto unit = static_cast<int>(parse_int(f[1], line, cols[1]));
    CalibrationSample s;
    s.truth.pitch_deg = parse_double(f[2], line, cols[2]);
    s.truth.roll_deg = parse_double(f[3], line, cols[3]);
    s.signals.v1 = parse_double(f[4], line, cols[4]);
    s.signals.v2 = parse_double(f[5], line, cols[5]);
    auto& ds = by_unit[unit];
    ds.unit_index = unit;
    ds.samples.push_back(s);
  }
  std::vector<CalibrationDataset> out;
  for (auto& [unit, ds] : by_unit) out.push_back(std::move(ds));
  return out;
}

std::string trace_to_csv(const MotionTrace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& r : trace.unit_rows) {
    const TipTraceRow& tip = trace.tip_rows.at(r.index);
    out += std::to_string(r.index) + ',' + std::to_string(r.unit) + ',' +
           format_double(r.truth.pitch_deg) + ',' + format_double(r.truth.roll_deg) + ',' +
           format_double(r.volts.v1) + ',' + format_double(r.volts.v2) + ',' +
           format_double(r.estimate.pitch_deg) + ',' + format_double(r.estimate.roll_deg) + ',' +
           format_double(tip.truth.pitch_deg) + ',' + format_double(tip.truth.roll_deg) + ',' +
           format_double(tip.estimate.pitch_deg) + ',' + format_double(tip.estimate.roll_deg) +
           '\n';
  }
  return out;
}

ParsedTrace parse_trace_csv(std::string_view text) {
  const auto cols = split(kTraceHeader, ',');
  ParsedTrace out;
  long long last_index = -1;
  for (const auto& [line, f] : read_table(text, kTraceHeader)) {
    const long long index = parse_int(f[0], line, cols[0]);
    parse_int(f[1], line, cols[1]);
    for (std::size_t c = 2; c < 8; ++c) parse_double(f[c], line, cols[c]);
    if (index < last_index) parse_error(line, "index column is not monotone");
    if (index == last_index) continue;
    last_index = index;
    out.tip_truth.push_back(
        {parse_double(f[8], line, cols[8]), parse_double(f[9], line, cols[9])});
    out.tip_estimate.push_back(
        {parse_double(f[10], line, cols[10]), parse_double(f[11], line, cols[11])});
  }
  return out;
}

json calibration_to_json(const PolyCalibration& c) {
  return json{{"unit_index", c.unit_index},
              {"k", c.k},
              {"j", c.j},
              {"fit_rms", {{"pitch", c.fit_rms_deg.pitch}, {"roll", c.fit_rms_deg.roll}}},
              {"created_from", c.created_from}};
}

PolyCalibration calibration_from_json(const json& j) {
  try {
    PolyCalibration c;
    c.unit_index = j.at("unit_index").get<int>();
    c.k = j.at("k").get<PolyCoefficients>();
    c.j = j.at("j").get<PolyCoefficients>();
    c.fit_rms_deg.pitch = j.at("fit_rms").at("pitch").get<double>();
    c.fit_rms_deg.roll = j.at("fit_rms").at("roll").get<double>();
    c.created_from = j.value("created_from", std::string{});
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed calibration: ") + e.what());
  }
}

json calibrations_to_json(const std::vector<PolyCalibration>& cals) {
  if (cals.size() == 1) return calibration_to_json(cals.front());
  json arr = json::array();
  for (const auto& c : cals) arr.push_back(calibration_to_json(c));
  return arr;
}

std::vector<PolyCalibration> calibrations_from_json(const json& j) {
  std::vector<PolyCalibration> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(calibration_from_json(item));
  } else {
    out.push_back(calibration_from_json(j));
  }
  return out;
}

json report_to_json(const ErrorReport& r) {
  return json{{"samples", r.samples},
              {"cycles", r.cycles},
              {"pitch", axis_errors_to_json(r.pitch)},
              {"roll", axis_errors_to_json(r.roll)}};
}

json table_to_json(const std::vector<TableRow>& rows) {
  json arr = json::array();
  for (const auto& row : rows) {
    arr.push_back({{"orientation", std::string(to_string(row.axis))},
                   {"percent_error", optional_number(row.percent_error)},
                   {"rms_tip_error_deg", row.rms_tip_error_deg},
                   {"max_tip_error_deg", row.max_tip_error_deg},
                   {"repeatability_std_deg", optional_number(row.repeatability_std_deg)}});
  }
  return arr;
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::string out(kTableHeader);
  out += '\n';
  for (const auto& row : rows) {
    out += std::string(to_string(row.axis)) + ',' +
           (row.percent_error ? format_double(*row.percent_error) : std::string()) + ',' +
           format_double(row.rms_tip_error_deg) + ',' + format_double(row.max_tip_error_deg) +
           '\n';
  }
  return out;
}

std::string demo_to_csv(const TheoryDemoResult& demo) {
  std::string out(kDemoHeader);
  out += '\n';
  for (std::size_t i = 0; i < demo.actual.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(demo.actual[i].pitch_deg) + ',' +
           format_double(demo.estimated[i].pitch_deg) + ',' +
           format_double(demo.actual[i].roll_deg) + ',' +
           format_double(demo.estimated[i].roll_deg) + '\n';
  }
  return out;
}

std::string dump_json(const json& j) { return j.dump(2) + '\n'; }

}  // namespace optoshape
