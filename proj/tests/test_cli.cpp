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


#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "prostar/commands.hpp"
#include "prostar/error.hpp"
#include "prostar/scene.hpp"

using namespace prostar;
using nlohmann::json;

namespace {

const std::string kScenes = PROSTAR_SCENE_DIR;

CommandResult run(const std::string& cmd, const std::string& scene) {
  CommandOptions opts;
  opts.stable = true;
  return run_command_file(cmd, kScenes + "/" + scene, opts);
}

}  // namespace

TEST_CASE("dilate on the Z/2 swap scene") {
  const CommandResult r = run("dilate", "z2_swap.json");
  CHECK(r.exit_code == 0);
  CHECK(r.report["schema"] == 1);
  CHECK(r.report["status"] == "pass");
  CHECK(r.report["result"]["rank"] == 2);
  for (const auto& [s, per_level] : r.report["result"]["certificates"].items())
    for (const auto& [l, c] : per_level.items()) CHECK(c.get<double>() == doctest::Approx(1.0));
  CHECK_FALSE(r.report.contains("wall_time_ms"));
}

TEST_CASE("dilate on the collapsing scene fails boundedness") {
  const CommandResult r = run("dilate", "collapsing.json");
  CHECK(r.exit_code == 1);
  CHECK(r.report["error"]["code"] == "BoundednessFails");
  const json w = json::parse(format_report(r.report))["error"]["witness"];
  REQUIRE(w.size() == 2);
  CHECK(w[0][0].get<double>() == 0.0);
  CHECK(std::abs(std::abs(w[1][0].get<double>()) - 1.0) < 1e-12);
}

TEST_CASE("front-end errors exit with 2") {
  CHECK(run("validate", "parse_error.json").exit_code == 2);
  CHECK(run("validate", "reference_error.json").exit_code == 2);
  CHECK(run("validate", "does_not_exist.json").exit_code == 2);
  CHECK(run("frobnicate", "z2_swap.json").exit_code == 2);
}

TEST_CASE("module gramian entries accept coefficient vectors or operator names") {
  std::ifstream in(kScenes + "/module_rank_deficient.json");
  json doc = json::parse(in);
  const Scene by_vector = parse_scene(doc);
  doc["modules"]["M"]["gramian"]["e1,e2"] = "one";
  const Scene by_name = parse_scene(doc);
  CHECK(by_vector.modules.at("M").gramian[0][1].isApprox(by_name.modules.at("M").gramian[0][1]));
  doc["modules"]["M"]["gramian"]["e1,e2"] = json::array({1, 0});
  try {
    parse_scene(doc);
    FAIL("wrong coefficient count accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

TEST_CASE("report formatting") {
  json r;
  r["schema"] = 1;
  r["x"] = 0.1234567890123456;
  r["neg_zero"] = -0.0;
  r["inf"] = std::numeric_limits<double>::infinity();
  const json back = json::parse(format_report(r));
  CHECK(back["x"].get<double>() == 0.123456789012);
  CHECK(back["inf"] == "Infinity");
  CHECK(format_report(r).find("-0") == std::string::npos);
}

TEST_CASE("manifest runs are deterministic and honor the exit-code contract") {
  std::ifstream in(kScenes + "/manifest.json");
  REQUIRE(in.good());
  const json manifest = json::parse(in);
  REQUIRE(manifest["runs"].size() >= 10);
  for (const auto& entry : manifest["runs"]) {
    const std::string scene = entry["scene"];
    const std::string cmd = entry["command"];
    const CommandResult a = run(cmd, scene);
    const CommandResult b = run(cmd, scene);
    INFO(cmd << " " << scene);
    CHECK(a.exit_code == entry["exit"].get<int>());
    CHECK(format_report(a.report) == format_report(b.report));
  }
}
