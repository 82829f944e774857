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

#include "optoshape/error.hpp"

namespace optoshape {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kNonPositiveProximity: return "NonPositiveProximity";
    case ErrorKind::kNonPositiveDistance: return "NonPositiveDistance";
    case ErrorKind::kInvalidGeometry: return "InvalidGeometry";
    case ErrorKind::kInvalidModel: return "InvalidModel";
    case ErrorKind::kGimbalLock: return "GimbalLock";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kInsufficientSamples: return "InsufficientSamples";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kZeroSpan: return "ZeroSpan";
    case ErrorKind::kInvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonPositiveProximity:
    case ErrorKind::kNonPositiveDistance:
    case ErrorKind::kInvalidGeometry:
    case ErrorKind::kInvalidModel:
    case ErrorKind::kGimbalLock:
      return 3;
    case ErrorKind::kRankDeficient:
    case ErrorKind::kInsufficientSamples:
      return 4;
    default:
      return 2;
  }
}

}  // namespace optoshape
