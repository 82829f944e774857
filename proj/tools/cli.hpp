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

#include <ostream>
#include <string>
#include <vector>

namespace optoshape::cli {

/// Runs one command line (args[0] is the program name) and returns the
/// process exit code: 0 success, 2 input/config error, 3 geometry/model
/// error, 4 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optoshape::cli
