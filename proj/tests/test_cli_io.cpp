// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sssta/cli_io.hpp"
#include "sssta/errors.hpp"

using namespace sssta;
namespace fs = std::filesystem;

namespace {

json base_doc(const std::string &method = "ula") {
  return json::parse(R"({
    "schema_version": 1,
    "method": ")" + method + R"(",
    "scenario": {
      "mainlobe": {"theta": 0, "phi": 90, "gamma": 45, "eta": 100},
      "sidelobe_regions": [
        {"phi": 90, "theta_start": 10, "theta_end": 90, "step": 1},
        {"phi": -90, "theta_start": 10, "theta_end": 90, "step": 1}
      ],
      "aperture": 10, "M": 41, "alpha": 0.5, "d_a": 0.8
    },
    "evaluation": {"pattern_step": 0.5}
  })");
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_SUITE("cli_io") {

TEST_CASE("unknown keys are rejected") {
  json doc = base_doc();
  doc["colour"] = "red";
  CHECK_THROWS_AS(config_from_json(doc), ConfigError);
  doc = base_doc();
  doc["scenario"]["mainlobe"]["tilt"] = 1;
  CHECK_THROWS_AS(config_from_json(doc), ConfigError);
}

TEST_CASE("schema version is required and checked") {
  json doc = base_doc();
  doc.erase("schema_version");
  CHECK_THROWS_AS(config_from_json(doc), ConfigError);
  doc["schema_version"] = 2;
  CHECK_THROWS_AS(config_from_json(doc), ConfigError);
  CHECK_NOTHROW(config_from_json(base_doc()));
}

TEST_CASE("out of range values are rejected") {
  json doc = base_doc();
  doc["scenario"]["alpha"] = -1;
  CHECK_THROWS_AS(config_from_json(doc), std::invalid_argument);
  doc = base_doc();
  doc["method"] = "magic";
  CHECK_THROWS(config_from_json(doc));
  doc = base_doc();
  doc["scenario"]["M"] = "many";
  CHECK_THROWS_AS(config_from_json(doc), ConfigError);
}

TEST_CASE("config round trip") {
  json doc = base_doc("airms");
  doc["seed"] = 7;
  doc["flags"] = {{"merge_rule", "centroid"}, {"cs_residual", false}};
  const RunConfig cfg = config_from_json(doc);
  CHECK(cfg.method == Method::Airms);
  CHECK(cfg.seed == 7);
  CHECK(cfg.imdsm.merge == MergeRule::Centroid);
  CHECK_FALSE(cfg.imdsm.cs_residual);
  CHECK(cfg.ula_count() == 21);
  const json again = config_to_json(cfg);
  CHECK(config_to_json(config_from_json(again)) == again);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1234567.0) == "1.23457e+06");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("exit codes") {
  CHECK(exit_code(DesignStatus::Ok) == 0);
  CHECK(exit_code(DesignStatus::NoSolution) == 3);
  CHECK(exit_code(DesignStatus::SolverFailure) == 4);
}

TEST_CASE("empty sweep gives a header only") {
  const std::string csv = sweep_csv(SweepAxis::Alpha, {});
  CHECK(csv.rfind("alpha,status,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
  CHECK(run_sweep(config_from_json(base_doc()), SweepAxis::M, {}).empty());
}

TEST_CASE("sweep values update the scenario") {
  const RunConfig cfg = config_from_json(base_doc());
  CHECK(apply_sweep_value(cfg, SweepAxis::M, 61).scenario.M == 61);
  CHECK(apply_sweep_value(cfg, SweepAxis::Alpha, 0.7).scenario.alpha == 0.7);
  const auto moved = apply_sweep_value(cfg, SweepAxis::ThetaMl, 40).scenario;
  CHECK(moved.mainlobe.theta == 40.0);
  CHECK_THROWS(apply_sweep_value(cfg, SweepAxis::Alpha, -0.5));
  for (auto a : {SweepAxis::M, SweepAxis::Alpha, SweepAxis::ThetaMl})
    CHECK(sweep_axis_from_string(to_string(a)) == a);
}

TEST_CASE("report round trip and deterministic outputs") {
  const RunConfig cfg = config_from_json(base_doc());
  const fs::path dir = fs::temp_directory_path() / "sssta_cli_io_test";
  fs::remove_all(dir);
  std::string first_report, first_pattern;
  for (int run = 0; run < 2; ++run) {
    const RunOutput out = run_pipeline(cfg);
    REQUIRE(out.report.status == DesignStatus::Ok);
    REQUIRE(out.metrics);
    write_outputs(dir, cfg, out);
    json doc = json::parse(slurp(dir / "report.json"));
    const DesignReport back = report_from_json(doc);
    CHECK(back.placements.size() == out.report.placements.size());
    CHECK(back.placements[3].position == out.report.placements[3].position);
    CHECK(back.placements[3].weight == out.report.placements[3].weight);
    doc.erase("wall_time");
    doc["metrics"].erase("wall_time");
    if (run == 0) {
      first_report = doc.dump();
      first_pattern = slurp(dir / "pattern.csv");
    } else {
      CHECK(doc.dump() == first_report);
      CHECK(slurp(dir / "pattern.csv") == first_pattern);
    }
  }
  CHECK(fs::exists(dir / "placements.csv"));
  fs::remove_all(dir);
}

}
