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

#include <Eigen/Dense>

// Second-order cone primitives shared by the interior-point solver and its tests.
namespace sssta::soc {

using Vec = Eigen::VectorXd;
using CRef = Eigen::Ref<const Eigen::VectorXd>;
using Ref = Eigen::Ref<Eigen::VectorXd>;

// x0^2 - ||x1||^2, factored for accuracy near the boundary.
double det(CRef x);

// Smallest eigenvalue x0 - ||x1||.
double min_eig(CRef x);

/// Nesterov-Todd scaling W = eta (2 wbar wbar' - J) with W^2 y = s.
struct NtScaling {
  Vec wbar;
  double eta = 1.0;

  static NtScaling identity(Eigen::Index n);
  static NtScaling compute(CRef s, CRef y);

  void apply(CRef x, Ref out) const;
  void apply_inverse(CRef x, Ref out) const;
  Eigen::MatrixXd matrix() const;
  Eigen::MatrixXd inverse_matrix() const;
};

Vec jordan_product(CRef x, CRef y);

// Solves lambda o x = r.
Vec jordan_solve(CRef lambda, CRef r);

// Largest step a >= 0 keeping u + a d in the cone (infinity when unbounded).
double max_step(CRef u, CRef d);

} // namespace sssta::soc
