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

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sssta/cli_io.hpp"
#include "sssta/errors.hpp"

namespace fs = std::filesystem;
using namespace sssta;

namespace {

constexpr const char *kOutputEnv = "SSSTA_OUTPUT_DIR";

fs::path output_dir(const RunConfig &cfg, const std::string &flag) {
  if (!flag.empty())
    return flag;
  if (const char *env = std::getenv(kOutputEnv); env && *env)
    return env;
  return cfg.output_dir;
}

int cmd_run(const std::string &config_path, const std::string &out_flag) {
  const RunConfig cfg = load_config(config_path);
  const RunOutput out = run_pipeline(cfg);
  const fs::path dir = output_dir(cfg, out_flag);
  write_outputs(dir, cfg, out);
  const auto &r = out.report;
  if (r.status != DesignStatus::Ok)
    std::cerr << "design: " << to_string(r.status) << ": " << r.message << "\n";
  std::cout << to_string(r.method) << " " << to_string(r.status) << " dipoles="
            << r.placements.size() << " -> " << dir.string() << "\n";
  return exit_code(r.status);
}

int cmd_sweep(const std::string &config_path, const std::string &axis_name,
              const std::vector<double> &values, const std::string &out_flag) {
  const RunConfig cfg = load_config(config_path);
  const SweepAxis axis = sweep_axis_from_string(axis_name);
  for (double v : values)
    apply_sweep_value(cfg, axis, v);
  const auto rows = run_sweep(cfg, axis, values);
  const fs::path dir = output_dir(cfg, out_flag);
  fs::create_directories(dir);
  const fs::path file = dir / ("sweep_" + to_string(axis) + ".csv");
  write_atomic(file, sweep_csv(axis, rows));
  for (const auto &row : rows)
    if (row.status != DesignStatus::Ok)
      std::cerr << "design: " << to_string(axis) << "=" << format_number(row.value) << ": "
                << to_string(row.status) << ": " << row.message << "\n";
  std::cout << rows.size() << " rows -> " << file.string() << "\n";
  return kExitOk;
}

int cmd_eval(const std::string &report_path, double step, const std::string &out_flag) {
  std::ifstream in(report_path);
  if (!in)
    throw ConfigError("cannot read report " + report_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  if (!doc.contains("config"))
    throw ConfigError("report has no config echo");
  RunConfig cfg = config_from_json(doc.at("config"));
  cfg.pattern_step = step;
  cfg.validate();
  const RunOutput out = evaluate(cfg, report_from_json(doc));
  const fs::path dir = out_flag.empty() ? fs::path(report_path).parent_path() : fs::path(out_flag);
  if (!dir.empty())
    fs::create_directories(dir);
  if (!out.pattern.empty())
    write_atomic(dir / "pattern.csv", pattern_csv(out.pattern));
  std::cout << report_to_json(cfg, out).at("metrics").dump(2) << "\n";
  return exit_code(out.report.status);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Sparse stretched tripole array designer"};
  app.require_subcommand(1);

  std::string config_path, out_flag, axis, report_path;
  std::vector<double> values;
  double step = 0.1;

  auto *run = app.add_subcommand("run", "Design one array from a config file");
  run->add_option("config", config_path)->required();
  run->add_option("-o,--output-dir", out_flag, "Overrides the config and " + std::string(kOutputEnv));

  auto *sweep = app.add_subcommand("sweep", "Repeat a design over one parameter");
  sweep->add_option("config", config_path)->required();
  sweep->add_option("--axis", axis, "M, alpha or theta_ml")->required();
  sweep->add_option("--values", values)->expected(0, -1);
  sweep->add_option("-o,--output-dir", out_flag);

  auto *eval = app.add_subcommand("eval", "Recompute metrics and pattern of a report");
  eval->add_option("report", report_path)->required();
  eval->add_option("--pattern-step", step)->check(CLI::PositiveNumber);
  eval->add_option("-o,--output-dir", out_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run)
      return cmd_run(config_path, out_flag);
    if (*sweep)
      return cmd_sweep(config_path, axis, values, out_flag);
    return cmd_eval(report_path, step, out_flag);
  } catch (const std::invalid_argument &e) {
    std::cerr << "design: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError &e) {
    std::cerr << "design: solver failure: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const std::exception &e) {
    std::cerr << "design: " << e.what() << "\n";
    return 1;
  }
}
