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

#include "sssta/cli_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <locale>
#include <set>
#include <sstream>

#include "sssta/errors.hpp"
#include "sssta/redesign.hpp"

namespace sssta {

namespace {

std::string to_string(EvidenceForm form) {
  return form == EvidenceForm::Standard ? "standard" : "printed";
}

EvidenceForm evidence_form_from_string(const std::string &name) {
  if (name == "standard")
    return EvidenceForm::Standard;
  if (name == "printed")
    return EvidenceForm::Printed;
  throw ConfigError("unknown evidence form '" + name + "'");
}

std::string to_string(EvidenceExponent e) {
  return e == EvidenceExponent::Samples ? "samples" : "groups";
}

EvidenceExponent evidence_exponent_from_string(const std::string &name) {
  if (name == "samples")
    return EvidenceExponent::Samples;
  if (name == "groups")
    return EvidenceExponent::Groups;
  throw ConfigError("unknown evidence exponent '" + name + "'");
}

// Object view that remembers which keys were read.
class Reader {
public:
  Reader(const json &obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object())
      throw ConfigError(where_ + " must be an object");
  }

  bool has(const std::string &key) const { return obj_.contains(key); }

  const json &raw(const std::string &key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  void get(const std::string &key, double &out) {
    if (!has(key))
      return;
    const json &v = raw(key);
    if (!v.is_number())
      throw ConfigError(path(key) + " must be a number");
    out = v.get<double>();
  }

  void get(const std::string &key, int &out) {
    if (!has(key))
      return;
    const json &v = raw(key);
    if (!v.is_number_integer())
      throw ConfigError(path(key) + " must be an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
      throw ConfigError(path(key) + " is out of range");
    out = static_cast<int>(x);
  }

  void get(const std::string &key, std::uint64_t &out) {
    if (!has(key))
      return;
    const json &v = raw(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      throw ConfigError(path(key) + " must be a non-negative integer");
    out = v.get<std::uint64_t>();
  }

  void get(const std::string &key, bool &out) {
    if (!has(key))
      return;
    const json &v = raw(key);
    if (!v.is_boolean())
      throw ConfigError(path(key) + " must be a boolean");
    out = v.get<bool>();
  }

  void get(const std::string &key, std::string &out) {
    if (!has(key))
      return;
    const json &v = raw(key);
    if (!v.is_string())
      throw ConfigError(path(key) + " must be a string");
    out = v.get<std::string>();
  }

  void get(const std::string &key, std::optional<double> &out) {
    if (!has(key))
      return;
    if (raw(key).is_null()) {
      out.reset();
      return;
    }
    double x = 0.0;
    get(key, x);
    out = x;
  }

  template <class T, class Parse> void get_enum(const std::string &key, T &out, Parse parse) {
    std::string name;
    if (!has(key))
      return;
    get(key, name);
    out = parse(name);
  }

  Reader child(const std::string &key) { return Reader(raw(key), path(key)); }

  std::string path(const std::string &key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto &item : obj_.items())
      if (!seen_.count(item.key()))
        throw ConfigError("unknown key " + path(item.key()));
  }

private:
  const json &obj_;
  std::string where_;
  std::set<std::string> seen_;
};

SourceState read_source(Reader r) {
  SourceState s;
  r.get("theta", s.theta);
  r.get("phi", s.phi);
  r.get("gamma", s.gamma);
  r.get("eta", s.eta);
  r.finish();
  return s;
}

json source_json(const SourceState &s) {
  return {{"theta", s.theta}, {"phi", s.phi}, {"gamma", s.gamma}, {"eta", s.eta}};
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json &v) {
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

json placement_json(const DipolePlacement &p) {
  return {{"position", p.position},
          {"orientation", to_string(p.orientation)},
          {"weight", {p.weight.real(), p.weight.imag()}}};
}

DipolePlacement placement_from(const json &j) {
  DipolePlacement p;
  p.position = j.at("position").get<double>();
  p.orientation = axis_from_string(j.at("orientation").get<std::string>());
  p.weight = {j.at("weight").at(0).get<double>(), j.at("weight").at(1).get<double>()};
  return p;
}

json metrics_json(const Metrics &m) {
  return {{"aperture", m.aperture},
          {"mean_adjacent_separation",
           m.separation_defined ? json(m.mean_adjacent_separation) : json(nullptr)},
          {"dipole_count", m.dipole_count},
          {"percent_decrease", m.percent_decrease},
          {"response_error", m.response_error},
          {"response_error_pre_redesign", m.response_error_pre},
          {"closest_sidelobe_db", number_or_null(m.closest_sidelobe_db)},
          {"closest_sidelobe_is_local_max", m.sidelobe_is_local_max},
          {"achieved_mainlobe", m.achieved_mainlobe},
          {"mainlobe_displaced", m.mainlobe_displaced},
          {"iterations", m.iterations},
          {"wall_time", m.wall_time}};
}

std::ostringstream classic_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  return os;
}

} // namespace

int exit_code(DesignStatus status) {
  switch (status) {
  case DesignStatus::Ok:
    return kExitOk;
  case DesignStatus::NoSolution:
    return kExitNoSolution;
  case DesignStatus::SolverFailure:
    return kExitSolverFailure;
  }
  return kExitSolverFailure;
}

int RunConfig::ula_count() const {
  return static_cast<int>(std::lround(scenario.aperture / ula_spacing)) + 1;
}

void RunConfig::validate() const {
  try {
    scenario.validate();
    solver.validate();
    bcs.validate();
    reweight.validate();
  } catch (const ConfigError &) {
    throw;
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (!(imdsm.activity_threshold > 0.0 && imdsm.activity_threshold < 1.0))
    throw ConfigError("imdsm.activity_threshold must lie in (0, 1)");
  if (!(ula_spacing > 0.0) || !std::isfinite(ula_spacing))
    throw ConfigError("evaluation.ula_spacing must be positive");
  if (!(pattern_step > 0.0 && pattern_step <= 10.0))
    throw ConfigError("evaluation.pattern_step must lie in (0, 10]");
  if (output_dir.empty())
    throw ConfigError("output_dir must not be empty");
}

RunConfig config_from_json(const json &doc) {
  RunConfig cfg;
  Reader top(doc, "config");
  if (!top.has("schema_version"))
    throw ConfigError("config.schema_version is required");
  int version = 0;
  top.get("schema_version", version);
  if (version != kSchemaVersion)
    throw ConfigError("unsupported schema_version " + std::to_string(version));
  if (!top.has("method"))
    throw ConfigError("config.method is required");
  top.get_enum("method", cfg.method, [](const std::string &s) {
    try {
      return method_from_string(s);
    } catch (const std::invalid_argument &e) {
      throw ConfigError(e.what());
    }
  });

  if (!top.has("scenario"))
    throw ConfigError("config.scenario is required");
  {
    Reader r = top.child("scenario");
    if (!r.has("mainlobe") || !r.has("sidelobe_regions"))
      throw ConfigError("config.scenario needs mainlobe and sidelobe_regions");
    auto &s = cfg.scenario;
    s.mainlobe = read_source(r.child("mainlobe"));
    const json &regions = r.raw("sidelobe_regions");
    if (!regions.is_array())
      throw ConfigError("config.scenario.sidelobe_regions must be an array");
    for (std::size_t i = 0; i < regions.size(); ++i) {
      Reader rr(regions[i], "config.scenario.sidelobe_regions[" + std::to_string(i) + "]");
      AngularRegion region;
      rr.get("phi", region.phi);
      rr.get("theta_start", region.theta_start);
      rr.get("theta_end", region.theta_end);
      rr.get("step", region.step);
      rr.finish();
      s.sidelobe_regions.push_back(region);
    }
    r.get("aperture", s.aperture);
    r.get("M", s.M);
    r.get("alpha", s.alpha);
    r.get("d_a", s.d_a);
    r.finish();
  }
  if (top.has("solver")) {
    Reader r = top.child("solver");
    auto &s = cfg.solver;
    r.get("feastol", s.feastol);
    r.get("abstol", s.abstol);
    r.get("reltol", s.reltol);
    r.get("max_iterations", s.max_iterations);
    r.get("zero_threshold", s.zero_threshold);
    r.get("refinement_steps", s.refinement_steps);
    r.finish();
  }
  if (top.has("bcs")) {
    Reader r = top.child("bcs");
    auto &b = cfg.bcs;
    r.get("beta_mt1", b.beta1);
    r.get("beta_mt2", b.beta2);
    r.get("noise_variance", b.noise_variance);
    r.get("max_em_iterations", b.max_iterations);
    r.get("hyper_tol", b.hyper_tol);
    r.get("prune_threshold", b.prune_threshold);
    r.finish();
  }
  if (top.has("reweight")) {
    Reader r = top.child("reweight");
    auto &w = cfg.reweight;
    r.get("epsilon_scale", w.epsilon_scale);
    r.get("epsilon", w.epsilon);
    r.get("standard_cap", w.standard_cap);
    r.get("airms_cap", w.airms_cap);
    r.get("literal_first_index", w.literal_first_index);
    r.finish();
  }
  if (top.has("imdsm")) {
    Reader r = top.child("imdsm");
    r.get_enum("cluster_rule", cfg.imdsm.cluster, cluster_rule_from_string);
    r.get("activity_threshold", cfg.imdsm.activity_threshold);
    r.get("redesign", cfg.imdsm.redesign);
    r.finish();
  }
  if (top.has("flags")) {
    Reader r = top.child("flags");
    r.get_enum("polarization_sign_convention", cfg.scenario.sign, [](const std::string &s) {
      try {
        return polarization_sign_from_string(s);
      } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
      }
    });
    r.get("cs_residual", cfg.imdsm.cs_residual);
    r.get_enum("merge_rule", cfg.imdsm.merge, merge_rule_from_string);
    r.get_enum("evidence_form", cfg.bcs.form, evidence_form_from_string);
    r.get_enum("evidence_exponent", cfg.bcs.exponent, evidence_exponent_from_string);
    r.finish();
  }
  if (top.has("evaluation")) {
    Reader r = top.child("evaluation");
    r.get("pattern_step", cfg.pattern_step);
    r.get("ula_spacing", cfg.ula_spacing);
    r.finish();
  }
  top.get("output_dir", cfg.output_dir);
  top.get("seed", cfg.seed);
  top.finish();

  cfg.validate();
  return cfg;
}

json config_to_json(const RunConfig &cfg) {
  json regions = json::array();
  for (const auto &r : cfg.scenario.sidelobe_regions)
    regions.push_back(
        {{"phi", r.phi}, {"theta_start", r.theta_start}, {"theta_end", r.theta_end}, {"step", r.step}});
  const auto &s = cfg.scenario;
  const auto &b = cfg.bcs;
  const auto &w = cfg.reweight;
  return {
      {"schema_version", kSchemaVersion},
      {"method", to_string(cfg.method)},
      {"scenario",
       {{"mainlobe", source_json(s.mainlobe)},
        {"sidelobe_regions", regions},
        {"aperture", s.aperture},
        {"M", s.M},
        {"alpha", s.alpha},
        {"d_a", s.d_a}}},
      {"solver",
       {{"feastol", cfg.solver.feastol},
        {"abstol", cfg.solver.abstol},
        {"reltol", cfg.solver.reltol},
        {"max_iterations", cfg.solver.max_iterations},
        {"zero_threshold", cfg.solver.zero_threshold},
        {"refinement_steps", cfg.solver.refinement_steps}}},
      {"bcs",
       {{"beta_mt1", b.beta1},
        {"beta_mt2", b.beta2},
        {"noise_variance", b.noise_variance ? json(*b.noise_variance) : json(nullptr)},
        {"max_em_iterations", b.max_iterations},
        {"hyper_tol", b.hyper_tol},
        {"prune_threshold", b.prune_threshold}}},
      {"reweight",
       {{"epsilon_scale", w.epsilon_scale},
        {"epsilon", w.epsilon ? json(*w.epsilon) : json(nullptr)},
        {"standard_cap", w.standard_cap},
        {"airms_cap", w.airms_cap},
        {"literal_first_index", w.literal_first_index}}},
      {"imdsm",
       {{"cluster_rule", to_string(cfg.imdsm.cluster)},
        {"activity_threshold", cfg.imdsm.activity_threshold},
        {"redesign", cfg.imdsm.redesign}}},
      {"flags",
       {{"polarization_sign_convention", to_string(s.sign)},
        {"cs_residual", cfg.imdsm.cs_residual},
        {"merge_rule", to_string(cfg.imdsm.merge)},
        {"evidence_form", to_string(b.form)},
        {"evidence_exponent", to_string(b.exponent)}}},
      {"evaluation", {{"pattern_step", cfg.pattern_step}, {"ula_spacing", cfg.ula_spacing}}},
      {"output_dir", cfg.output_dir},
      {"seed", cfg.seed},
  };
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception &e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

DesignReport execute(const RunConfig &cfg) {
  ImdsmConfig ic = cfg.imdsm;
  ic.solver = cfg.solver;
  ic.bcs = cfg.bcs;
  switch (cfg.method) {
  case Method::CsImdsm:
  case Method::BcsImdsm:
    return run_imdsm(cfg.scenario, cfg.method, ic);
  case Method::Airms:
    return run_airms(cfg.scenario, {cfg.solver, cfg.reweight, cfg.imdsm.redesign});
  case Method::Ula:
    return design_ula(cfg.scenario, cfg.ula_spacing);
  }
  throw ConfigError("unknown method");
}

RunOutput evaluate(const RunConfig &cfg, DesignReport report) {
  RunOutput out;
  out.report = std::move(report);
  if (out.report.placements.empty())
    return out;
  const SampledProblem problem = sample_scenario(cfg.scenario);
  out.metrics = compute_metrics(out.report, cfg.scenario, problem, cfg.ula_count(), cfg.pattern_step);
  const SourceState &ml = cfg.scenario.mainlobe;
  out.pattern = beam_pattern(out.report.placements, pattern_grid(ml.gamma, ml.eta, cfg.pattern_step),
                             ml, cfg.scenario.sign);
  return out;
}

RunOutput run_pipeline(const RunConfig &cfg) {
  cfg.validate();
  DesignReport report;
  try {
    report = execute(cfg);
  } catch (const SolverError &e) {
    report.method = cfg.method;
    report.status = DesignStatus::SolverFailure;
    report.message = e.what();
    return {report, std::nullopt, {}};
  }
  if (report.method != Method::Ula &&
      !is_sst_feasible(report.placements, cfg.scenario.d_a, cfg.scenario.aperture)) {
    report.status = DesignStatus::SolverFailure;
    report.message = "design violates the SST feasibility constraints";
    return {report, std::nullopt, {}};
  }
  try {
    return evaluate(cfg, std::move(report));
  } catch (const SolverError &e) {
    RunOutput out;
    out.report.method = cfg.method;
    out.report.status = DesignStatus::SolverFailure;
    out.report.message = e.what();
    return out;
  }
}

json report_to_json(const RunConfig &cfg, const RunOutput &out) {
  const DesignReport &r = out.report;
  json placements = json::array();
  for (const auto &p : r.placements)
    placements.push_back(placement_json(p));
  json initial = json::array();
  for (const auto &p : r.initial_placements)
    initial.push_back(placement_json(p));
  json log = json::array();
  for (const auto &rec : r.log) {
    json cluster = json::array();
    for (const auto &c : rec.cluster)
      cluster.push_back({{"position", c.position},
                         {"orientation", to_string(c.orientation)},
                         {"magnitude", c.magnitude}});
    log.push_back({{"iteration", rec.iteration},
                   {"grid_origin", rec.grid_origin},
                   {"grid_span", rec.grid_span},
                   {"grid_count", rec.grid_count},
                   {"solver_status", rec.solver_status},
                   {"active_groups", rec.active_groups},
                   {"cluster", cluster},
                   {"merged", rec.merged ? placement_json(*rec.merged) : json(nullptr)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"config", config_to_json(cfg)},
          {"method", to_string(r.method)},
          {"status", to_string(r.status)},
          {"message", r.message},
          {"placements", placements},
          {"initial_placements", initial},
          {"metrics", out.metrics ? metrics_json(*out.metrics) : json(nullptr)},
          {"iterations", r.iterations},
          {"log", log},
          {"wall_time", r.wall_time}};
}

DesignReport report_from_json(const json &doc) {
  try {
    DesignReport r;
    r.method = method_from_string(doc.at("method").get<std::string>());
    r.status = design_status_from_string(doc.at("status").get<std::string>());
    r.message = doc.at("message").get<std::string>();
    for (const auto &p : doc.at("placements"))
      r.placements.push_back(placement_from(p));
    for (const auto &p : doc.at("initial_placements"))
      r.initial_placements.push_back(placement_from(p));
    r.iterations = doc.at("iterations").get<int>();
    r.wall_time = number_from(doc.at("wall_time"));
    for (const auto &j : doc.at("log")) {
      IterationRecord rec;
      rec.iteration = j.at("iteration").get<int>();
      rec.grid_origin = j.at("grid_origin").get<double>();
      rec.grid_span = j.at("grid_span").get<double>();
      rec.grid_count = j.at("grid_count").get<int>();
      rec.solver_status = j.at("solver_status").get<std::string>();
      rec.active_groups = j.at("active_groups").get<int>();
      for (const auto &c : j.at("cluster"))
        rec.cluster.push_back({c.at("position").get<double>(),
                               axis_from_string(c.at("orientation").get<std::string>()),
                               c.at("magnitude").get<double>()});
      if (!j.at("merged").is_null())
        rec.merged = placement_from(j.at("merged"));
      r.log.push_back(rec);
    }
    return r;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

std::string format_number(double value) {
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  auto os = classic_stream();
  os.precision(6);
  os << value;
  return os.str();
}

std::string placements_csv(const std::vector<DipolePlacement> &placements) {
  std::string out = "n,d_n_lambda,orientation,w_re,w_im\n";
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const auto &p = placements[i];
    out += std::to_string(i + 1) + "," + format_number(p.position) + "," + to_string(p.orientation) +
           "," + format_number(p.weight.real()) + "," + format_number(p.weight.imag()) + "\n";
  }
  return out;
}

std::string pattern_csv(const std::vector<PatternSample> &pattern) {
  std::string out = "theta_signed_deg,gain_db\n";
  for (const auto &s : pattern)
    out += format_number(s.theta_signed) + "," + format_number(s.gain_db) + "\n";
  return out;
}

void write_atomic(const std::filesystem::path &path, const std::string &content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_outputs(const std::filesystem::path &dir, const RunConfig &cfg, const RunOutput &out) {
  std::filesystem::create_directories(dir);
  write_atomic(dir / "report.json", report_to_json(cfg, out).dump(2) + "\n");
  write_atomic(dir / "placements.csv", placements_csv(out.report.placements));
  if (!out.pattern.empty())
    write_atomic(dir / "pattern.csv", pattern_csv(out.pattern));
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
  case SweepAxis::M:
    return "M";
  case SweepAxis::Alpha:
    return "alpha";
  case SweepAxis::ThetaMl:
    return "theta_ml";
  }
  return "M";
}

SweepAxis sweep_axis_from_string(const std::string &name) {
  if (name == "M")
    return SweepAxis::M;
  if (name == "alpha")
    return SweepAxis::Alpha;
  if (name == "theta_ml")
    return SweepAxis::ThetaMl;
  throw ConfigError("unknown sweep axis '" + name + "'");
}

RunConfig apply_sweep_value(const RunConfig &base, SweepAxis axis, double value) {
  RunConfig cfg = base;
  auto &s = cfg.scenario;
  switch (axis) {
  case SweepAxis::M:
    if (value != std::floor(value))
      throw ConfigError("M sweep values must be integers");
    s.M = static_cast<int>(value);
    break;
  case SweepAxis::Alpha:
    s.alpha = value;
    break;
  case SweepAxis::ThetaMl: {
    s.mainlobe.theta = value;
    const double branch = s.mainlobe.phi < 0.0 ? -90.0 : 90.0;
    const double step = s.sidelobe_regions.empty() ? 1.0 : s.sidelobe_regions.front().step;
    s.sidelobe_regions.clear();
    if (value - 10.0 >= 0.0)
      s.sidelobe_regions.push_back({branch, 0.0, value - 10.0, step});
    if (value + 10.0 <= 90.0)
      s.sidelobe_regions.push_back({branch, value + 10.0, 90.0, step});
    s.sidelobe_regions.push_back({-branch, 0.0, 90.0, step});
    break;
  }
  }
  cfg.validate();
  return cfg;
}

std::vector<SweepRow> run_sweep(const RunConfig &base, SweepAxis axis,
                                const std::vector<double> &values) {
  std::vector<SweepRow> rows;
  for (double v : values) {
    SweepRow row;
    row.value = v;
    const RunOutput out = run_pipeline(apply_sweep_value(base, axis, v));
    row.status = out.report.status;
    row.message = out.report.message;
    row.metrics = out.metrics;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(SweepAxis axis, const std::vector<SweepRow> &rows) {
  std::string out = to_string(axis) +
                    ",status,aperture,mean_adjacent_separation,dipole_count,percent_decrease,"
                    "response_error,closest_sidelobe_db,wall_time,iterations,achieved_mainlobe\n";
  for (const auto &row : rows) {
    out += format_number(row.value) + "," + to_string(row.status);
    if (row.status != DesignStatus::Ok || !row.metrics) {
      out += ",NA,NA,NA,NA,NA,NA,NA,NA,NA\n";
      continue;
    }
    const Metrics &m = *row.metrics;
    out += "," + format_number(m.aperture) + "," +
           (m.separation_defined ? format_number(m.mean_adjacent_separation) : "NA") + "," +
           std::to_string(m.dipole_count) + "," + std::to_string(m.percent_decrease) + "," +
           format_number(m.response_error) + "," + format_number(m.closest_sidelobe_db) + "," +
           format_number(m.wall_time) + "," + std::to_string(m.iterations) + "," +
           format_number(m.achieved_mainlobe) + "\n";
  }
  return out;
}

} // namespace sssta
