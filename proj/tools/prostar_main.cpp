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

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "prostar/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dilations of operator-valued kernels over locally Hilbert spaces"};
  std::string command;
  std::string scene;
  std::string out;
  prostar::CommandOptions options;

  std::string names;
  for (const auto& n : prostar::command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("--scene", scene, "Scene file (JSON)")->required();
  app.add_option("--out", out, "Write the report here instead of standard output");
  app.add_option("--tol", options.tol, "Tolerance scale factor")->capture_default_str();
  app.add_flag("--stable", options.stable, "Omit wall-time so reports are byte-identical");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const prostar::CommandResult r = prostar::run_command_file(command, scene, options);
  const std::string text = prostar::format_report(r.report);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << out << "\n";
      return 2;
    }
    f << text;
  }
  return r.exit_code;
}
