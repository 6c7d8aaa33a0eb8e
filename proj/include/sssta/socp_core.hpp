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

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sssta/array_model.hpp"
#include "sssta/problem_builder.hpp"

namespace sssta {

enum class SocpStatus { Optimal, Infeasible, MaxIterations };

std::string to_string(SocpStatus status);

struct SolverConfig {
  double feastol = 1e-8;
  double abstol = 1e-8;
  double reltol = 1e-8;
  int max_iterations = 200;
  double zero_threshold = 1e-6;
  int refinement_steps = 1;

  void validate() const;
};

/// Result of minimizing c_hat' w subject to ||p_hat - S_hat w|| <= alpha and
/// ||(w_a, w_b)|| <= w_q for each group.
struct SocpSolution {
  Eigen::VectorXd w_hat;
  Eigen::VectorXcd complex_weights; // effective coefficients, p = S * v
  double objective = 0.0;
  SocpStatus status = SocpStatus::MaxIterations;
  double residual = 0.0;
  int iterations = 0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double gap = 0.0;
  // Dual variables of the residual cone and of the group cones.
  Eigen::VectorXd y_residual;
  Eigen::VectorXd y_groups;
};

SocpSolution solve_socp(const LiftedProblem &lp, const SolverConfig &cfg = {});

// Distance from p_hat to the range of S_hat.
double least_squares_residual(const LiftedProblem &lp);

Eigen::VectorXd group_magnitudes(const Eigen::VectorXcd &coefficients);

// Group indices whose magnitude exceeds zero_threshold * max magnitude.
std::vector<int> active_group_indices(const Eigen::VectorXcd &coefficients, double zero_threshold);

// Active groups as (location index, orientation).
std::vector<std::pair<int, Axis>> active_groups(const SocpSolution &sol, double zero_threshold);

} // namespace sssta
