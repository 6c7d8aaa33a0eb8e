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

#include "sssta/array_model.hpp"

namespace sssta {

/// Sidelobe samples along one phi branch, inclusive of both theta ends.
struct AngularRegion {
  double phi = 90.0;
  double theta_start = 0.0;
  double theta_end = 90.0;
  double step = 1.0;

  void validate() const;
  std::vector<double> thetas() const;
};

/// A design problem. The mainlobe carries the shared polarization (gamma, eta).
struct DesignScenario {
  SourceState mainlobe;
  std::vector<AngularRegion> sidelobe_regions;
  double aperture = 10.0;
  int M = 301;
  double alpha = 0.5;
  double d_a = 0.8;
  PolarizationSign sign = PolarizationSign::AsPrinted;

  SamplingGrid grid() const;
  void validate() const;
};

struct SampledProblem {
  std::vector<SourceState> sources;
  Eigen::VectorXcd reference;
  Eigen::MatrixXcd steering;
  SamplingGrid grid;
  PolarizationSign sign = PolarizationSign::AsPrinted;
  int duplicates_removed = 0;

  int samples() const { return static_cast<int>(sources.size()); }
  int groups() const { return 3 * grid.count; }
};

// Rows are full_steering(grid, source) for each source.
Eigen::MatrixXcd steering_matrix(const std::vector<SourceState> &sources, const SamplingGrid &grid,
                                 PolarizationSign sign);

SampledProblem sample_scenario(const DesignScenario &scn);

// Same sources and reference on a different candidate grid.
SampledProblem resample_problem(const SampledProblem &base, const SamplingGrid &grid);

/// Real-valued conic data. Group g occupies columns 3g..3g+2 as (q, re, im)
/// of the effective coefficient v_g, so that S_hat * w_hat = [Re(S v); Im(S v)].
struct LiftedProblem {
  Eigen::VectorXd c_hat;
  Eigen::MatrixXd S_hat;
  Eigen::VectorXd p_hat;
  double alpha = 0.0;

  int groups() const { return static_cast<int>(c_hat.size() / 3); }
  int rows() const { return static_cast<int>(p_hat.size()); }
  Eigen::VectorXd group_weights() const;
};

LiftedProblem lift(const SampledProblem &problem, double alpha,
                   const std::optional<Eigen::VectorXd> &delta = std::nullopt);

LiftedProblem lift(const Eigen::MatrixXcd &steering, const Eigen::VectorXcd &reference,
                   double alpha, const std::optional<Eigen::VectorXd> &delta = std::nullopt);

Eigen::VectorXd lift_coefficients(const Eigen::VectorXcd &v);
Eigen::VectorXcd reconstruct_complex(const Eigen::VectorXd &w_hat);
Eigen::VectorXd split_complex(const Eigen::VectorXcd &x);

} // namespace sssta
