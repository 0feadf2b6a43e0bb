// Copyright 2026 The prostar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace prostar {

struct CommandOptions {
  double tol = 1e-9;
  bool stable = false;  // omit wall-time
};

struct CommandResult {
  nlohmann::json report;
  int exit_code = 0;
};

const std::vector<std::string>& command_names();

// Runs one command against a parsed scene document. Never throws: every
// failure becomes a report with exit code 1 (construction or check failure)
// or 2 (parse or reference error).
CommandResult run_command(const std::string& command, const nlohmann::json& scene,
                          const CommandOptions& options = {});
// Same, loading the scene from a file; `scene_path` is echoed in the report.
CommandResult run_command_file(const std::string& command, const std::string& scene_path,
                               const CommandOptions& options = {});

// Canonical text of a report: numbers rounded to 12 significant digits,
// two-space indentation, trailing newline.
std::string format_report(const nlohmann::json& report);

}  // namespace prostar
