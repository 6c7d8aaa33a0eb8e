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
#include <string>
#include <vector>

#include "sssta/array_model.hpp"

namespace sssta {

enum class Method { CsImdsm, BcsImdsm, Airms, Ula };

std::string to_string(Method method);
Method method_from_string(const std::string &name);

enum class DesignStatus { Ok, NoSolution, SolverFailure };

std::string to_string(DesignStatus status);
DesignStatus design_status_from_string(const std::string &name);

struct ClusterMember {
  double position = 0.0;
  Axis orientation = Axis::X;
  double magnitude = 0.0;
};

/// One outer iteration of a placement search.
struct IterationRecord {
  int iteration = 0;
  double grid_origin = 0.0;
  double grid_span = 0.0;
  int grid_count = 0;
  std::string solver_status;
  int active_groups = 0;
  std::vector<ClusterMember> cluster;
  std::optional<DipolePlacement> merged;
};

struct DesignReport {
  Method method = Method::CsImdsm;
  DesignStatus status = DesignStatus::Ok;
  std::string message;
  std::vector<DipolePlacement> placements;         // final, after any redesign
  std::vector<DipolePlacement> initial_placements; // as produced by the search
  std::vector<IterationRecord> log;
  int iterations = 0;
  double wall_time = 0.0;
};

// Positions strictly increasing, adjacent gaps >= d_a - 1e-9 and inside [0, aperture].
bool is_sst_feasible(const std::vector<DipolePlacement> &placements, double d_a, double aperture);

} // namespace sssta
