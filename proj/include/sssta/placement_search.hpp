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

#include "sssta/bayesian_engine.hpp"
#include "sssta/problem_builder.hpp"
#include "sssta/report.hpp"
#include "sssta/reweighting.hpp"
#include "sssta/socp_core.hpp"

namespace sssta {

// Nonzero solver coefficient at a grid point; `coefficient` is the effective v.
struct ActiveEntry {
  double position = 0.0;
  Axis orientation = Axis::X;
  cd coefficient{0.0, 0.0};
};

enum class MergeRule { Centroid, Strongest };

std::string to_string(MergeRule rule);
MergeRule merge_rule_from_string(const std::string &name);

// Chain: consecutive gaps below d_a. Window: locations closer than d_a to the leftmost.
enum class ClusterRule { Chain, Window };

std::string to_string(ClusterRule rule);
ClusterRule cluster_rule_from_string(const std::string &name);

struct ImdsmState {
  std::vector<DipolePlacement> fixed;
  double remaining_origin = 0.0;
  double remaining_aperture = 0.0;
  int iteration = 0;
  Eigen::VectorXcd residual_reference;
};

struct ImdsmConfig {
  SolverConfig solver;
  MtBcsConfig bcs;
  bool cs_residual = true;
  MergeRule merge = MergeRule::Strongest;
  ClusterRule cluster = ClusterRule::Window;
  // Relative to the largest coefficient of each solve.
  double activity_threshold = 1e-3;
  bool redesign = true;
};

struct AirmsConfig {
  SolverConfig solver;
  ReweightConfig reweight;
  bool redesign = true;
};

// Entries above the relative zero threshold, sorted by position then axis.
std::vector<ActiveEntry> active_entries(const Eigen::VectorXcd &coefficients,
                                        const SamplingGrid &grid, double zero_threshold);

/// Leftmost chain of active locations whose consecutive gaps are below d_a,
/// or with ClusterRule::Window the locations within d_a of the leftmost one.
/// Empty input gives an empty cluster.
std::vector<ActiveEntry> first_cluster(const std::vector<ActiveEntry> &active, double d_a,
                                       ClusterRule rule = ClusterRule::Chain);

/// Collapses a cluster to one dipole carrying the strongest member's
/// orientation and coefficient (stored conjugated as the placement weight).
DipolePlacement merge_and_fix(const std::vector<ActiveEntry> &cluster,
                              MergeRule rule = MergeRule::Centroid);

/// Grid of M points from the last fixed position + d_a to the aperture end,
/// or nullopt once the remaining span drops below min_span.
std::optional<SamplingGrid> resample(const ImdsmState &state, int M, double d_a, double aperture,
                                     double min_span);

// prev minus the response of `fixed` at every source.
Eigen::VectorXcd residual_reference(const Eigen::VectorXcd &prev, const DipolePlacement &fixed,
                                    const std::vector<SourceState> &sources,
                                    PolarizationSign sign = PolarizationSign::AsPrinted);

DesignReport run_imdsm(const DesignScenario &scenario, Method method, const ImdsmConfig &cfg = {});

DesignReport run_airms(const DesignScenario &scenario, const AirmsConfig &cfg = {});

} // namespace sssta
