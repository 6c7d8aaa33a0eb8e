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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sssta/problem_builder.hpp"
#include "sssta/socp_core.hpp"

namespace sssta {

enum class ReweightMode { Standard, Airms };

struct ReweightConfig {
  // epsilon = epsilon_scale * max group magnitude of the first solve unless set.
  double epsilon_scale = 1e-3;
  std::optional<double> epsilon;
  int standard_cap = 20;
  int airms_cap = 10;
  // Treat grid group 0 as the always-accepted first entry instead of the
  // leftmost active location.
  bool literal_first_index = false;

  void validate() const;
};

struct ReweightState {
  int iteration = 0;
  Eigen::VectorXd delta;
  Eigen::VectorXcd previous_weights;
  double epsilon = 0.0;
  std::vector<int> l0_history;
};

struct ReweightResult {
  SocpSolution solution;
  ReweightState state;
  bool converged = false;       // stopping rule met within the cap
  bool constraint_met = false;  // active set is size-constraint compliant
};

Eigen::VectorXd standard_reweights(const Eigen::VectorXcd &prev, double epsilon);

/// Size-constraint aware reweights. `positions` holds the location of each
/// grid point (length prev.size() / 3).
Eigen::VectorXd airms_reweights(const Eigen::VectorXcd &prev, const Eigen::VectorXd &positions,
                                double epsilon, double d_a, double zero_threshold = 1e-6,
                                bool literal_first_index = false);

// True when the active groups sit at distinct locations at least d_a apart.
bool satisfies_size_constraint(const Eigen::VectorXcd &coefficients,
                               const Eigen::VectorXd &positions, double d_a,
                               double zero_threshold = 1e-6);

Eigen::VectorXd grid_positions(const SamplingGrid &grid);

ReweightResult reweighted_loop(const SampledProblem &problem, double alpha,
                               const SolverConfig &solver, const ReweightConfig &cfg,
                               ReweightMode mode = ReweightMode::Standard, double d_a = 0.8);

} // namespace sssta
