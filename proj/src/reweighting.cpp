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

#include "sssta/reweighting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sssta/errors.hpp"

namespace sssta {

namespace {

constexpr double kPositionTol = 1e-9;

struct ActiveLocation {
  int location;
  int kept;             // group index of the largest orientation
  std::vector<int> others;
};

std::vector<ActiveLocation> active_locations(const Eigen::VectorXcd &coefficients,
                                             double zero_threshold) {
  std::map<int, ActiveLocation> by_loc;
  const Eigen::VectorXd mag = coefficients.cwiseAbs();
  for (int g : active_group_indices(coefficients, zero_threshold)) {
    const int loc = g / 3;
    auto [it, fresh] = by_loc.try_emplace(loc, ActiveLocation{loc, g, {}});
    if (fresh)
      continue;
    ActiveLocation &a = it->second;
    // groups arrive in increasing index, so strict > keeps the lowest axis on ties
    if (mag(g) > mag(a.kept)) {
      a.others.push_back(a.kept);
      a.kept = g;
    } else {
      a.others.push_back(g);
    }
  }
  std::vector<ActiveLocation> out;
  for (auto &kv : by_loc)
    out.push_back(std::move(kv.second));
  return out;
}

} // namespace

void ReweightConfig::validate() const {
  if (!(epsilon_scale > 0.0))
    throw ConfigError("epsilon_scale must be positive");
  if (epsilon && !(*epsilon > 0.0))
    throw ConfigError("epsilon must be positive");
  if (standard_cap < 1 || airms_cap < 1)
    throw ConfigError("iteration caps must be positive");
}

Eigen::VectorXd standard_reweights(const Eigen::VectorXcd &prev, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be positive");
  return (prev.cwiseAbs().array() + epsilon).inverse().matrix();
}

Eigen::VectorXd airms_reweights(const Eigen::VectorXcd &prev, const Eigen::VectorXd &positions,
                                double epsilon, double d_a, double zero_threshold,
                                bool literal_first_index) {
  if (!(d_a > 0.0))
    throw std::invalid_argument("d_a must be positive");
  if (positions.size() * 3 != prev.size())
    throw std::invalid_argument("positions must hold one entry per location");
  Eigen::VectorXd delta = standard_reweights(prev, epsilon);
  const double penalty = 1.0 / epsilon;

  bool have_last = false;
  double last = 0.0;
  const double mx = prev.size() ? prev.cwiseAbs().maxCoeff() : 0.0;
  const double threshold = mx > 0.0 ? std::max(zero_threshold, epsilon / mx) : zero_threshold;
  for (const ActiveLocation &a : active_locations(prev, threshold)) {
    for (int g : a.others)
      delta(g) = penalty;
    const double pos = positions(a.location);
    const bool forced = literal_first_index && a.kept == 0;
    if (!have_last || forced || pos - last >= d_a - kPositionTol) {
      have_last = true;
      last = pos;
    } else {
      delta(a.kept) = penalty;
    }
  }
  if (literal_first_index)
    delta(0) = 1.0 / (std::abs(prev(0)) + epsilon);
  return delta;
}

bool satisfies_size_constraint(const Eigen::VectorXcd &coefficients,
                               const Eigen::VectorXd &positions, double d_a,
                               double zero_threshold) {
  const auto locs = active_locations(coefficients, zero_threshold);
  for (std::size_t i = 0; i < locs.size(); ++i) {
    if (!locs[i].others.empty())
      return false;
    if (i > 0 && positions(locs[i].location) - positions(locs[i - 1].location) < d_a - kPositionTol)
      return false;
  }
  return true;
}

Eigen::VectorXd grid_positions(const SamplingGrid &grid) {
  Eigen::VectorXd p(grid.count);
  for (int m = 0; m < grid.count; ++m)
    p(m) = grid.position(m);
  return p;
}

ReweightResult reweighted_loop(const SampledProblem &problem, double alpha,
                               const SolverConfig &solver, const ReweightConfig &cfg,
                               ReweightMode mode, double d_a) {
  cfg.validate();
  const Eigen::VectorXd positions = grid_positions(problem.grid);
  const int cap = mode == ReweightMode::Airms ? cfg.airms_cap : cfg.standard_cap;

  auto solve = [&](const std::optional<Eigen::VectorXd> &delta) {
    SocpSolution sol = solve_socp(lift(problem, alpha, delta), solver);
    if (sol.status == SocpStatus::Infeasible)
      throw SolverError("reweighted problem is infeasible for alpha = " + std::to_string(alpha));
    return sol;
  };

  ReweightResult res;
  ReweightState &st = res.state;
  res.solution = solve(std::nullopt);
  st.iteration = 1;
  st.delta = Eigen::VectorXd::Ones(problem.groups());
  st.l0_history.push_back(
      static_cast<int>(active_group_indices(res.solution.complex_weights, solver.zero_threshold).size()));
  const double max_mag =
      res.solution.complex_weights.size() ? res.solution.complex_weights.cwiseAbs().maxCoeff() : 0.0;
  st.epsilon = cfg.epsilon ? *cfg.epsilon : cfg.epsilon_scale * (max_mag > 0.0 ? max_mag : 1.0);

  auto compliant = [&] {
    return satisfies_size_constraint(res.solution.complex_weights, positions, d_a,
                                     solver.zero_threshold);
  };
  auto stable = [&] {
    const auto &h = st.l0_history;
    const std::size_t n = h.size();
    return n >= 3 && h[n - 1] == h[n - 2] && h[n - 2] == h[n - 3];
  };

  if (st.l0_history.back() == 0) {
    res.converged = true;
    res.constraint_met = true;
    return res;
  }

  for (;;) {
    if (mode == ReweightMode::Airms && compliant()) {
      res.converged = true;
      break;
    }
    if (mode == ReweightMode::Standard && stable()) {
      res.converged = true;
      break;
    }
    if (st.iteration >= cap)
      break;

    st.previous_weights = res.solution.complex_weights;
    st.delta = mode == ReweightMode::Airms
                   ? airms_reweights(st.previous_weights, positions, st.epsilon, d_a,
                                     solver.zero_threshold, cfg.literal_first_index)
                   : standard_reweights(st.previous_weights, st.epsilon);
    res.solution = solve(st.delta);
    ++st.iteration;
    st.l0_history.push_back(static_cast<int>(
        active_group_indices(res.solution.complex_weights, solver.zero_threshold).size()));
  }
  res.constraint_met = compliant();
  return res;
}

} // namespace sssta
