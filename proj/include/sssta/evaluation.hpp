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

#include "sssta/problem_builder.hpp"
#include "sssta/report.hpp"

namespace sssta {

/// Performance figures of a finished design.
struct Metrics {
  double aperture = 0.0;
  double mean_adjacent_separation = 0.0;
  bool separation_defined = false; // false below two dipoles
  int dipole_count = 0;
  int percent_decrease = 0;
  double response_error = 0.0;      // final weights
  double response_error_pre = 0.0;  // weights before redesign
  double closest_sidelobe_db = 0.0;
  bool sidelobe_is_local_max = false;
  double achieved_mainlobe = 0.0; // signed theta in degrees
  bool mainlobe_displaced = false;
  int iterations = 0;
  double wall_time = 0.0;
};

// theta >= 0 lies on phi = +90, theta < 0 on phi = -90.
struct PatternSample {
  double theta_signed = 0.0;
  double gain_db = 0.0;
};

struct SidelobeLevel {
  double level_db = 0.0;
  double theta_signed = 0.0;
  bool local_max = false;
};

double signed_theta(const SourceState &src);

// Signed-theta sweep over [-90, 90] carrying the mainlobe polarization.
std::vector<SourceState> pattern_grid(double gamma, double eta, double step = 0.1);

/// |response| in dB relative to the response at `mainlobe`.
std::vector<PatternSample> beam_pattern(const std::vector<DipolePlacement> &placements,
                                        const std::vector<SourceState> &grid,
                                        const SourceState &mainlobe,
                                        PolarizationSign sign = PolarizationSign::AsPrinted);

// Signed theta of the pattern maximum.
double achieved_mainlobe(const std::vector<PatternSample> &pattern);

/// Level of the local maximum inside the sidelobe regions nearest the
/// mainlobe; ties in distance go to the higher level. Without any local
/// maximum, falls back to the region maximum with local_max = false.
SidelobeLevel closest_sidelobe(const std::vector<PatternSample> &pattern, double mainlobe_theta,
                               const std::vector<AngularRegion> &regions);

double response_error(const std::vector<DipolePlacement> &placements,
                      const SampledProblem &problem);

Metrics compute_metrics(const DesignReport &report, const DesignScenario &scenario,
                        const SampledProblem &problem, int ula_count = 21,
                        double pattern_step = 0.1);

} // namespace sssta
