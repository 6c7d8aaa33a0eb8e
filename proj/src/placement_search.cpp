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

#include "sssta/placement_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sssta/errors.hpp"
#include "sssta/redesign.hpp"

namespace sssta {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<ClusterMember> describe(const std::vector<ActiveEntry> &cluster) {
  std::vector<ClusterMember> out;
  for (const ActiveEntry &e : cluster)
    out.push_back({e.position, e.orientation, std::abs(e.coefficient)});
  return out;
}

void finish(DesignReport &report, const SampledProblem &problem, bool redesign) {
  report.initial_placements = report.placements;
  if (!redesign || report.placements.empty())
    return;
  try {
    report.placements = redesign_weights(report.placements, problem);
  } catch (const SolverError &e) {
    report.status = DesignStatus::SolverFailure;
    report.message = e.what();
  }
}

} // namespace

std::string to_string(MergeRule rule) {
  return rule == MergeRule::Centroid ? "centroid" : "strongest";
}

MergeRule merge_rule_from_string(const std::string &name) {
  if (name == "centroid")
    return MergeRule::Centroid;
  if (name == "strongest")
    return MergeRule::Strongest;
  throw ConfigError("unknown merge rule '" + name + "'");
}

std::string to_string(ClusterRule rule) { return rule == ClusterRule::Chain ? "chain" : "window"; }

ClusterRule cluster_rule_from_string(const std::string &name) {
  if (name == "chain")
    return ClusterRule::Chain;
  if (name == "window")
    return ClusterRule::Window;
  throw ConfigError("unknown cluster rule '" + name + "'");
}

std::vector<ActiveEntry> active_entries(const Eigen::VectorXcd &coefficients,
                                        const SamplingGrid &grid, double zero_threshold) {
  if (coefficients.size() != 3 * grid.count)
    throw std::invalid_argument("coefficient length does not match the grid");
  std::vector<ActiveEntry> out;
  for (int g : active_group_indices(coefficients, zero_threshold))
    out.push_back({grid.position(g / 3), static_cast<Axis>(g % 3), coefficients(g)});
  return out;
}

std::vector<ActiveEntry> first_cluster(const std::vector<ActiveEntry> &active, double d_a,
                                       ClusterRule rule) {
  std::vector<ActiveEntry> cluster;
  for (const ActiveEntry &e : active) {
    const double anchor =
        cluster.empty() ? e.position
                        : (rule == ClusterRule::Chain ? cluster.back() : cluster.front()).position;
    if (!cluster.empty() && e.position - anchor >= d_a)
      break;
    cluster.push_back(e);
  }
  return cluster;
}

DipolePlacement merge_and_fix(const std::vector<ActiveEntry> &cluster, MergeRule rule) {
  if (cluster.empty())
    throw std::invalid_argument("cannot merge an empty cluster");
  std::size_t best = 0;
  double total = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    const double mag = std::abs(cluster[i].coefficient);
    total += mag;
    moment += mag * cluster[i].position;
    if (mag > std::abs(cluster[best].coefficient))
      best = i;
  }
  DipolePlacement p;
  p.orientation = cluster[best].orientation;
  p.weight = std::conj(cluster[best].coefficient);
  p.position = rule == MergeRule::Centroid && total > 0.0 ? moment / total : cluster[best].position;
  return p;
}

std::optional<SamplingGrid> resample(const ImdsmState &state, int M, double d_a, double aperture,
                                     double min_span) {
  if (M < 2)
    throw ConfigError("M must be at least 2");
  const double start = state.fixed.empty() ? 0.0 : state.fixed.back().position + d_a;
  const double span = aperture - start;
  if (!state.fixed.empty() && span < min_span)
    return std::nullopt;
  if (span <= 0.0)
    return std::nullopt;
  return SamplingGrid{start, span / (M - 1), M};
}

Eigen::VectorXcd residual_reference(const Eigen::VectorXcd &prev, const DipolePlacement &fixed,
                                    const std::vector<SourceState> &sources,
                                    PolarizationSign sign) {
  if (prev.size() != static_cast<Eigen::Index>(sources.size()))
    throw std::invalid_argument("reference length does not match the sources");
  Eigen::VectorXcd out = prev;
  const cd v = std::conj(fixed.weight);
  for (std::size_t r = 0; r < sources.size(); ++r)
    out(static_cast<Eigen::Index>(r)) -=
        steering_component(fixed.position, fixed.orientation, sources[r], sign) * v;
  return out;
}

DesignReport run_imdsm(const DesignScenario &scenario, Method method, const ImdsmConfig &cfg) {
  if (method != Method::CsImdsm && method != Method::BcsImdsm)
    throw ConfigError("run_imdsm handles cs-imdsm and bcs-imdsm only");
  scenario.validate();
  cfg.solver.validate();
  cfg.bcs.validate();
  if (!(cfg.activity_threshold > 0.0 && cfg.activity_threshold < 1.0))
    throw ConfigError("activity_threshold must lie in (0, 1)");
  const auto t0 = Clock::now();

  const SampledProblem base = sample_scenario(scenario);
  const bool subtract = method == Method::BcsImdsm || cfg.cs_residual;
  const double min_span = scenario.aperture / (scenario.M - 1);
  const int max_outer = static_cast<int>(std::ceil(scenario.aperture / scenario.d_a)) + 1;

  DesignReport report;
  report.method = method;
  ImdsmState st;
  st.residual_reference = base.reference;

  while (st.iteration < max_outer) {
    const auto grid = resample(st, scenario.M, scenario.d_a, scenario.aperture, min_span);
    if (!grid)
      break;
    ++st.iteration;
    st.remaining_origin = grid->origin;
    st.remaining_aperture = grid->span();

    SampledProblem sub = resample_problem(base, *grid);
    if (subtract)
      sub.reference = st.residual_reference;

    IterationRecord rec;
    rec.iteration = st.iteration;
    rec.grid_origin = grid->origin;
    rec.grid_span = grid->span();
    rec.grid_count = grid->count;

    Eigen::VectorXcd coeffs;
    try {
      if (method == Method::CsImdsm) {
        const SocpSolution sol = solve_socp(lift(sub, scenario.alpha), cfg.solver);
        rec.solver_status = to_string(sol.status);
        if (sol.status == SocpStatus::Infeasible) {
          report.log.push_back(rec);
          if (st.fixed.empty()) {
            report.status = DesignStatus::NoSolution;
            report.message = "sampled problem is infeasible for the given alpha";
          }
          break;
        }
        coeffs = sol.complex_weights;
      } else {
        const BcsResult res = mt_maximize(sub, scenario.alpha, cfg.bcs);
        rec.solver_status = res.state.converged ? "converged" : "max-iterations";
        coeffs = res.weights;
      }
    } catch (const SolverError &e) {
      rec.solver_status = "failure";
      report.log.push_back(rec);
      report.status = DesignStatus::SolverFailure;
      report.message = e.what();
      break;
    }

    const auto active = active_entries(coeffs, *grid, cfg.activity_threshold);
    rec.active_groups = static_cast<int>(active.size());
    const auto cluster = first_cluster(active, scenario.d_a, cfg.cluster);
    if (cluster.empty()) {
      report.log.push_back(rec);
      break;
    }
    const DipolePlacement fixed = merge_and_fix(cluster, cfg.merge);
    rec.cluster = describe(cluster);
    rec.merged = fixed;
    report.log.push_back(rec);
    st.fixed.push_back(fixed);
    if (subtract)
      st.residual_reference = residual_reference(st.residual_reference, fixed, base.sources, base.sign);
  }

  report.iterations = st.iteration;
  report.placements = st.fixed;
  if (report.status == DesignStatus::Ok)
    finish(report, base, cfg.redesign);
  else
    report.initial_placements = report.placements;
  report.wall_time = seconds_since(t0);
  return report;
}

DesignReport run_airms(const DesignScenario &scenario, const AirmsConfig &cfg) {
  scenario.validate();
  const auto t0 = Clock::now();
  const SampledProblem base = sample_scenario(scenario);

  DesignReport report;
  report.method = Method::Airms;
  ReweightResult rw;
  try {
    rw = reweighted_loop(base, scenario.alpha, cfg.solver, cfg.reweight, ReweightMode::Airms,
                         scenario.d_a);
  } catch (const SolverError &e) {
    report.status = DesignStatus::SolverFailure;
    report.message = e.what();
    report.wall_time = seconds_since(t0);
    return report;
  }

  report.iterations = rw.state.iteration;
  for (std::size_t i = 0; i < rw.state.l0_history.size(); ++i) {
    IterationRecord rec;
    rec.iteration = static_cast<int>(i) + 1;
    rec.grid_origin = base.grid.origin;
    rec.grid_span = base.grid.span();
    rec.grid_count = base.grid.count;
    rec.active_groups = rw.state.l0_history[i];
    rec.solver_status = to_string(rw.solution.status);
    report.log.push_back(rec);
  }
  if (!rw.constraint_met) {
    report.status = DesignStatus::NoSolution;
    report.message = "size constraint not met within the iteration cap";
    report.wall_time = seconds_since(t0);
    return report;
  }
  for (const ActiveEntry &e :
       active_entries(rw.solution.complex_weights, base.grid, cfg.solver.zero_threshold))
    report.placements.push_back({e.position, e.orientation, std::conj(e.coefficient)});
  finish(report, base, cfg.redesign);
  report.wall_time = seconds_since(t0);
  return report;
}

} // namespace sssta
