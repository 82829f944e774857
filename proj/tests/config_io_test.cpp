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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "optoshape/config.hpp"
#include "optoshape/error.hpp"
#include "optoshape/io.hpp"
#include "optoshape/rng.hpp"

namespace optoshape {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

template <typename Fn>
Error error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an Error";
  return Error(ErrorKind::kInvalidArgument, "none");
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "optoshape_config_io_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(ConfigTest, DefaultsRoundTripThroughJson) {
  const ToolkitConfig a;
  const ToolkitConfig b = config_from_json(config_to_json(a));
  EXPECT_EQ(config_to_json(a), config_to_json(b));
  EXPECT_NO_THROW(a.validate());
  EXPECT_EQ(a.sweep.step_deg, 0.5);
  EXPECT_EQ(a.experiment().chain.units.size(), 4u);
}

TEST(ConfigTest, PartialSectionsKeepDefaults) {
  const ToolkitConfig c = config_from_json(json::parse(R"({"seed": 99, "sweep": {"step_deg": 1.0}})"));
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.sweep.step_deg, 1.0);
  EXPECT_EQ(c.sweep.limit_deg, 15.0);
  EXPECT_EQ(c.validation.cycles, 4);
}

TEST(ConfigTest, UnknownKeysRejected) {
  EXPECT_EQ(error_of([] { config_from_json(json::parse(R"({"sweeep": {}})")); }).kind(),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(
      error_of([] { config_from_json(json::parse(R"({"sweep": {"stride": 1}})")); }).kind(),
      ErrorKind::kInvalidConfig);
  EXPECT_EQ(
      error_of([] { config_from_json(json::parse(R"({"sweep": {"step_deg": "x"}})")); }).kind(),
      ErrorKind::kInvalidConfig);
}

TEST(ConfigTest, ValidationErrorsAreConfigErrors) {
  ToolkitConfig c;
  c.sweep.step_deg = 20.0;
  EXPECT_EQ(error_of([&] { c.validate(); }).kind(), ErrorKind::kInvalidConfig);
  c = {};
  c.validation.amplitude_deg = 61.0;
  EXPECT_EQ(error_of([&] { c.validate(); }).kind(), ErrorKind::kInvalidConfig);
  c = {};
  c.geometry.reflector_center_mm = {1.5, 0.0, 0.8};
  c.geometry.reflector_radius_mm = 20.0;
  EXPECT_NE(error_of([&] { c.validate(); }).kind(), ErrorKind::kInvalidConfig);
}

TEST(ConfigTest, Overrides) {
  ToolkitConfig c;
  apply_override(c, "sweep.step_deg=0.1");
  apply_override(c, "validation.axis=roll");
  apply_override(c, "output_dir=/tmp/x");
  EXPECT_EQ(c.sweep.step_deg, 0.1);
  EXPECT_EQ(c.validation.axis, Axis::kRoll);
  EXPECT_EQ(c.output_dir, "/tmp/x");
  EXPECT_EQ(error_of([&] { apply_override(c, "sweep.nope=1"); }).kind(),
            ErrorKind::kInvalidConfig);
  EXPECT_EQ(error_of([&] { apply_override(c, "no_equals_sign"); }).kind(),
            ErrorKind::kInvalidConfig);
}

TEST(ConfigTest, LoadFromFile) {
  const fs::path p = scratch("cfg.json");
  write_file_atomic(p, R"({"chain": {"n_units": 2}, "validation": {"amplitude_deg": 30}})");
  const ToolkitConfig c = load_config(p);
  EXPECT_EQ(c.chain.n_units, 2);
  EXPECT_NO_THROW(c.validate());
  write_file_atomic(p, "{not json");
  EXPECT_EQ(error_of([&] { load_config(p); }).kind(), ErrorKind::kInvalidConfig);
}

TEST(FormatTest, ShortestRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.gaussian(0.0, 100.0);
    ASSERT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-15.0), "-15");
}

TEST(AtomicWriteTest, LeavesNoTemporary) {
  const fs::path p = scratch("atomic.txt");
  write_file_atomic(p, "first");
  write_file_atomic(p, "second");
  EXPECT_EQ(read_file(p), "second");
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST(DatasetCsvTest, RoundTripIsExact) {
  CalibrationDataset a{0, {{{1.5, -2.25}, {0.1, 2.0 / 3.0}}, {{0, 0}, {1, 2}}}};
  CalibrationDataset b{3, {{{-15, 15}, {4.9, 0.000123}}}};
  const std::string csv = dataset_to_csv({a, b});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kDatasetHeader);
  const auto back = parse_dataset_csv(csv);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].digest(), a.digest());
  EXPECT_EQ(back[1].digest(), b.digest());
  EXPECT_EQ(dataset_to_csv(back), csv);
}

TEST(DatasetCsvTest, ErrorsCarryLineNumbers) {
  const std::string head = std::string(kDatasetHeader) + "\n";
  Error e = error_of([&] { parse_dataset_csv(head + "0,0,1,2,3,4\n1,0,1,x,3,4\n"); });
  EXPECT_EQ(e.kind(), ErrorKind::kParse);
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  e = error_of([&] { parse_dataset_csv(head + "0,0,1,2,3\n"); });
  EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  e = error_of([&] { parse_dataset_csv("a,b,c\n"); });
  EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  EXPECT_EQ(error_of([] { parse_dataset_csv(""); }).kind(), ErrorKind::kParse);
  EXPECT_TRUE(parse_dataset_csv(head).empty());
}

TEST(TraceCsvTest, RoundTripTipColumns) {
  MotionTrace t;
  for (std::size_t i = 0; i < 3; ++i) {
    const double x = static_cast<double>(i);
    t.tip_rows.push_back({i, {x, -x}, {x + 0.5, -x}});
    for (int u = 0; u < 2; ++u) t.unit_rows.push_back({i, u, {x / 2, 0}, {1, 2}, {x / 2, 0}});
  }
  const std::string csv = trace_to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTraceHeader);
  const ParsedTrace p = parse_trace_csv(csv);
  ASSERT_EQ(p.tip_truth.size(), 3u);
  EXPECT_EQ(p.tip_truth[2], (OrientationPR{2, -2}));
  EXPECT_EQ(p.tip_estimate[1], (OrientationPR{1.5, -1}));
  EXPECT_EQ(error_of([] { parse_trace_csv(std::string(kDatasetHeader) + "\n"); }).kind(),
            ErrorKind::kParse);
}

TEST(CalibrationJsonTest, RoundTrip) {
  PolyCalibration c;
  c.unit_index = 2;
  for (std::size_t t = 0; t < kPolyTerms; ++t) {
    c.k[t] = 1.0 / (1.0 + static_cast<double>(t));
    c.j[t] = -std::sqrt(static_cast<double>(t));
  }
  c.fit_rms_deg = {0.1, 0.2};
  c.created_from = "fnv1a64:0123456789abcdef";
  const json single = calibrations_to_json({c});
  EXPECT_TRUE(single.is_object());
  const auto back = calibrations_from_json(json::parse(dump_json(single)));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].k, c.k);
  EXPECT_EQ(back[0].j, c.j);
  EXPECT_EQ(back[0].created_from, c.created_from);
  EXPECT_TRUE(calibrations_to_json({c, c}).is_array());
  EXPECT_EQ(error_of([] { calibrations_from_json(json{{"k", 1}}); }).kind(), ErrorKind::kParse);
}

TEST(ReportJsonTest, OptionalFieldsBecomeNull) {
  ErrorReport r;
  r.samples = 4;
  r.pitch.rms_deg = 1.0;
  r.pitch.percent_error = 2.0;
  const json j = report_to_json(r);
  EXPECT_EQ(j["samples"], 4);
  EXPECT_EQ(j["pitch"]["percent_error"], 2.0);
  EXPECT_TRUE(j["roll"]["percent_error"].is_null());
  EXPECT_TRUE(j["pitch"]["repeatability_std_deg"].is_null());
}

TEST(TableCsvTest, Header) {
  const std::string csv = table_to_csv({{Axis::kPitch, 0.5, 1.0, 2.0, 0.1}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTableHeader);
  EXPECT_NE(csv.find("pitch,0.5,1,2"), std::string::npos);
}

}  // namespace
}  // namespace optoshape
