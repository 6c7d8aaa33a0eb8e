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

#include <doctest.h>

#include "sssta/evaluation.hpp"
#include "sssta/redesign.hpp"

using namespace sssta;

namespace {

DesignScenario broadside() {
  DesignScenario s;
  s.mainlobe = {0.0, 90.0, 45.0, 100.0};
  s.sidelobe_regions = {{90.0, 10.0, 90.0, 1.0}, {-90.0, 10.0, 90.0, 1.0}};
  s.M = 21;
  return s;
}

DesignReport report_at(const std::vector<double> &positions, const SampledProblem &problem) {
  DesignReport r;
  for (double p : positions)
    r.placements.push_back({p, Axis::X, 1.0});
  r.placements = redesign_weights(r.placements, problem);
  r.initial_placements = r.placements;
  return r;
}

std::vector<PatternSample> synthetic(const std::vector<std::pair<double, double>> &pts) {
  std::vector<PatternSample> out;
  for (auto [t, g] : pts)
    out.push_back({t, g});
  return out;
}

} // namespace

TEST_SUITE("evaluation") {

TEST_CASE("metrics of the reference broadside layout") {
  const auto s = broadside();
  const auto problem = sample_scenario(s);
  const auto r =
      report_at({0.56, 1.43, 2.56, 3.48, 4.48, 5.44, 6.37, 7.25, 8.12, 9.02, 9.89}, problem);
  const auto m = compute_metrics(r, s, problem, 21, 0.5);
  CHECK(m.aperture == doctest::Approx(9.33));
  CHECK(m.mean_adjacent_separation == doctest::Approx(0.933));
  CHECK(m.separation_defined);
  CHECK(m.dipole_count == 11);
  CHECK(m.percent_decrease == 48);
  CHECK(m.achieved_mainlobe == 0.0);
  CHECK_FALSE(m.mainlobe_displaced);
  CHECK(m.response_error == m.response_error_pre);
}

TEST_CASE("single dipole has no separation") {
  const auto s = broadside();
  const auto problem = sample_scenario(s);
  const auto m = compute_metrics(report_at({5.0}, problem), s, problem, 21, 1.0);
  CHECK(m.aperture == 0.0);
  CHECK(m.mean_adjacent_separation == 0.0);
  CHECK_FALSE(m.separation_defined);
  CHECK(m.percent_decrease == 95);
}

TEST_CASE("evenly spaced dipoles") {
  const auto s = broadside();
  const auto problem = sample_scenario(s);
  std::vector<double> pos;
  for (int k = 0; k <= 10; ++k)
    pos.push_back(k);
  const auto m = compute_metrics(report_at(pos, problem), s, problem, 21, 1.0);
  CHECK(m.mean_adjacent_separation == doctest::Approx(1.0));
}

TEST_CASE("pattern is 0 dB at the mainlobe") {
  const auto s = broadside();
  const auto problem = sample_scenario(s);
  const auto r = report_at({0.0, 1.0, 2.5}, problem);
  const auto grid = pattern_grid(45.0, 100.0, 1.0);
  CHECK(grid.size() == 181);
  CHECK(grid.front().phi == -90.0);
  CHECK(signed_theta(grid.front()) == -90.0);
  const auto pat = beam_pattern(r.placements, grid, s.mainlobe);
  CHECK(pat[90].theta_signed == 0.0);
  CHECK(std::abs(pat[90].gain_db) <= 1e-9);
  CHECK_THROWS(beam_pattern({}, grid, s.mainlobe));
  CHECK_THROWS(pattern_grid(45.0, 100.0, 0.0));
}

TEST_CASE("closest sidelobe on a synthetic pattern") {
  const std::vector<AngularRegion> regions = {{90.0, 10.0, 90.0, 1.0}, {-90.0, 10.0, 90.0, 1.0}};
  const auto pat = synthetic({{-40, -50}, {-30, -20}, {-20, -45}, {-10, -40}, {0, 0},
                              {10, -35}, {20, -30}, {30, -25}, {40, -60}});
  const auto sl = closest_sidelobe(pat, 0.0, regions);
  CHECK(sl.local_max);
  CHECK(sl.level_db == -20.0);
  CHECK(sl.theta_signed == -30.0);
  CHECK(achieved_mainlobe(pat) == 0.0);
}

TEST_CASE("equal distance ties go to the higher lobe") {
  const std::vector<AngularRegion> regions = {{90.0, 10.0, 90.0, 1.0}, {-90.0, 10.0, 90.0, 1.0}};
  const auto pat = synthetic({{-30, -50}, {-20, -22}, {-10, -50}, {0, 0}, {10, -50},
                              {20, -18}, {30, -50}});
  const auto sl = closest_sidelobe(pat, 0.0, regions);
  CHECK(sl.level_db == -18.0);
  CHECK(sl.theta_signed == 20.0);
}

TEST_CASE("monotone region falls back to its maximum") {
  const std::vector<AngularRegion> regions = {{90.0, 10.0, 90.0, 1.0}};
  const auto pat = synthetic({{0, 0}, {10, -5}, {20, -10}, {30, -15}});
  const auto sl = closest_sidelobe(pat, 0.0, regions);
  CHECK_FALSE(sl.local_max);
  CHECK(sl.level_db == -5.0);
}

}
