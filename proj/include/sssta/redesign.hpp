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

#include <vector>

#include <Eigen/Dense>

#include "sssta/problem_builder.hpp"
#include "sssta/report.hpp"

namespace sssta {

// Rows are sources, columns are placements.
Eigen::MatrixXcd placement_steering(const std::vector<DipolePlacement> &placements,
                                    const std::vector<SourceState> &sources,
                                    PolarizationSign sign = PolarizationSign::AsPrinted);

/// Equality-constrained least squares over the masked columns of S:
///   minimize ||p - S v||  subject to  S.row(mainlobe_row) v = 1.
/// Entries outside the mask are exactly zero. Throws SolverError when the
/// mainlobe row vanishes on the masked support.
Eigen::VectorXcd constrained_fit(const Eigen::MatrixXcd &S, const Eigen::VectorXcd &p,
                                 int mainlobe_row, const std::vector<bool> &mask);

// Returns the placements with redesigned weights (stored conjugated).
std::vector<DipolePlacement> redesign_weights(std::vector<DipolePlacement> placements,
                                              const SampledProblem &problem);

DesignReport design_ula(const DesignScenario &scenario, double spacing = 0.5);

} // namespace sssta
