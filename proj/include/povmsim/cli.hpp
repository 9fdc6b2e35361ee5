// Copyright 2026 The povmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace povmsim::cli {

struct ReproduceRow {
  std::string id;
  std::string group;
  std::string label;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Recomputes the reference table; `only` filters by id or group (empty = all).
std::vector<ReproduceRow> reproduce_paper(const std::vector<std::string>& only = {});

/// Runs the command line; returns the process exit code.
/// 0 success, 1 malformed input, 2 solver failure, 3 verification failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace povmsim::cli
