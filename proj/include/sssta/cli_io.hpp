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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sssta/bayesian_engine.hpp"
#include "sssta/evaluation.hpp"
#include "sssta/placement_search.hpp"
#include "sssta/report.hpp"
#include "sssta/reweighting.hpp"
#include "sssta/socp_core.hpp"

namespace sssta {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Process exit codes of the design tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNoSolution = 3, kExitSolverFailure = 4 };

int exit_code(DesignStatus status);

/// Everything needed to reproduce one design run.
struct RunConfig {
  DesignScenario scenario;
  Method method = Method::BcsImdsm;
  SolverConfig solver;
  MtBcsConfig bcs;
  ReweightConfig reweight;
  ImdsmConfig imdsm; // solver and bcs members are overwritten from the fields above
  double ula_spacing = 0.5;
  double pattern_step = 0.1;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  void validate() const;
  // ULA element count at ula_spacing over the scenario aperture.
  int ula_count() const;
};

/// Parses a config document. Unknown keys, a missing or different
/// schema_version and out-of-range values all throw ConfigError.
RunConfig config_from_json(const json &doc);
json config_to_json(const RunConfig &cfg);
RunConfig load_config(const std::filesystem::path &path);

struct RunOutput {
  DesignReport report;
  std::optional<Metrics> metrics; // absent without placements
  std::vector<PatternSample> pattern;
};

DesignReport execute(const RunConfig &cfg);

/// Runs the method, checks SST feasibility and evaluates the result.
/// Solver exceptions become a SolverFailure report.
RunOutput run_pipeline(const RunConfig &cfg);

// Metrics and pattern for an existing report.
RunOutput evaluate(const RunConfig &cfg, DesignReport report);

json report_to_json(const RunConfig &cfg, const RunOutput &out);
DesignReport report_from_json(const json &doc);

// "%.6g" in the classic locale; non-finite values print as nan, inf or -inf.
std::string format_number(double value);

std::string placements_csv(const std::vector<DipolePlacement> &placements);
std::string pattern_csv(const std::vector<PatternSample> &pattern);

// Writes via a temporary file in the same directory and a rename.
void write_atomic(const std::filesystem::path &path, const std::string &content);

/// Writes report.json, placements.csv and, when a pattern exists,
/// pattern.csv into `dir`.
void write_outputs(const std::filesystem::path &dir, const RunConfig &cfg, const RunOutput &out);

enum class SweepAxis { M, Alpha, ThetaMl };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string &name);

/// Copy of `base` with one axis changed. For theta_ml the sidelobe regions
/// are rebuilt: the mainlobe branch keeps [0, theta - 10] and [theta + 10, 90]
/// where non-empty, the other branch covers [0, 90].
RunConfig apply_sweep_value(const RunConfig &base, SweepAxis axis, double value);

struct SweepRow {
  double value = 0.0;
  DesignStatus status = DesignStatus::Ok;
  std::string message;
  std::optional<Metrics> metrics;
};

std::vector<SweepRow> run_sweep(const RunConfig &base, SweepAxis axis,
                                const std::vector<double> &values);

// Failed or empty runs become NA rows.
std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow> &rows);

} // namespace sssta
