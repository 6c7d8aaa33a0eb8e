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

#include "sssta/evaluation.hpp"

#include <cmath>
#include <limits>

#include "sssta/errors.hpp"
#include "sssta/redesign.hpp"

namespace sssta {

namespace {

constexpr double kThetaTol = 1e-9;

bool in_region(double theta_signed, const AngularRegion &r) {
  const bool branch = r.phi >= 0.0 ? theta_signed >= -kThetaTol : theta_signed <= kThetaTol;
  const double t = std::abs(theta_signed);
  return branch && t >= r.theta_start - kThetaTol && t <= r.theta_end + kThetaTol;
}

} // namespace

double signed_theta(const SourceState &src) { return src.phi < 0.0 ? -src.theta : src.theta; }

std::vector<SourceState> pattern_grid(double gamma, double eta, double step) {
  if (!(step > 0.0))
    throw ConfigError("pattern step must be positive");
  const int half = static_cast<int>(std::floor(90.0 / step + 1e-9));
  std::vector<SourceState> grid;
  grid.reserve(static_cast<std::size_t>(2 * half + 1));
  for (int k = -half; k <= half; ++k) {
    const double t = k * step;
    grid.push_back({std::abs(t), k < 0 ? -90.0 : 90.0, gamma, eta});
  }
  return grid;
}

std::vector<PatternSample> beam_pattern(const std::vector<DipolePlacement> &placements,
                                        const std::vector<SourceState> &grid,
                                        const SourceState &mainlobe, PolarizationSign sign) {
  if (placements.empty())
    throw std::invalid_argument("beam pattern needs at least one dipole");
  const double ref = std::abs(response(placements, mainlobe, sign));
  if (!(ref > 0.0))
    throw SolverError("mainlobe response is zero");
  std::vector<PatternSample> out;
  out.reserve(grid.size());
  for (const SourceState &src : grid) {
    const double mag = std::abs(response(placements, src, sign)) / ref;
    const double db =
        mag > 0.0 ? 20.0 * std::log10(mag) : -std::numeric_limits<double>::infinity();
    out.push_back({signed_theta(src), db});
  }
  return out;
}

double achieved_mainlobe(const std::vector<PatternSample> &pattern) {
  if (pattern.empty())
    throw std::invalid_argument("empty pattern");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pattern.size(); ++i)
    if (pattern[i].gain_db > pattern[best].gain_db)
      best = i;
  return pattern[best].theta_signed;
}

SidelobeLevel closest_sidelobe(const std::vector<PatternSample> &pattern, double mainlobe_theta,
                               const std::vector<AngularRegion> &regions) {
  auto inside = [&](double t) {
    for (const AngularRegion &r : regions)
      if (in_region(t, r))
        return true;
    return false;
  };

  SidelobeLevel best;
  double best_dist = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t i = 1; i + 1 < pattern.size(); ++i) {
    const PatternSample &s = pattern[i];
    if (!inside(s.theta_signed))
      continue;
    if (!(s.gain_db > pattern[i - 1].gain_db && s.gain_db > pattern[i + 1].gain_db))
      continue;
    const double dist = std::abs(s.theta_signed - mainlobe_theta);
    if (!found || dist < best_dist - kThetaTol ||
        (std::abs(dist - best_dist) <= kThetaTol && s.gain_db > best.level_db)) {
      best = {s.gain_db, s.theta_signed, true};
      best_dist = dist;
      found = true;
    }
  }
  if (found)
    return best;

  best.level_db = -std::numeric_limits<double>::infinity();
  for (const PatternSample &s : pattern)
    if (inside(s.theta_signed) && s.gain_db > best.level_db)
      best = {s.gain_db, s.theta_signed, false};
  return best;
}

double response_error(const std::vector<DipolePlacement> &placements,
                      const SampledProblem &problem) {
  if (placements.empty())
    return problem.reference.norm();
  const Eigen::MatrixXcd S = placement_steering(placements, problem.sources, problem.sign);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(placements.size()));
  for (std::size_t k = 0; k < placements.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = std::conj(placements[k].weight);
  return (problem.reference - S * v).norm();
}

Metrics compute_metrics(const DesignReport &report, const DesignScenario &scenario,
                        const SampledProblem &problem, int ula_count, double pattern_step) {
  Metrics m;
  const auto &pl = report.placements;
  m.dipole_count = static_cast<int>(pl.size());
  m.iterations = report.iterations;
  m.wall_time = report.wall_time;
  if (ula_count > 0)
    m.percent_decrease = static_cast<int>(
        std::lround(100.0 * (1.0 - static_cast<double>(m.dipole_count) / ula_count)));
  m.response_error = response_error(pl, problem);
  m.response_error_pre = response_error(report.initial_placements, problem);
  if (pl.empty())
    return m;

  m.aperture = pl.back().position - pl.front().position;
  if (pl.size() >= 2) {
    m.mean_adjacent_separation = m.aperture / static_cast<double>(pl.size() - 1);
    m.separation_defined = true;
  }

  const SourceState &ml = scenario.mainlobe;
  const auto pattern =
      beam_pattern(pl, pattern_grid(ml.gamma, ml.eta, pattern_step), ml, problem.sign);
  m.achieved_mainlobe = achieved_mainlobe(pattern);
  m.mainlobe_displaced = std::abs(m.achieved_mainlobe - signed_theta(ml)) > pattern_step / 2;
  const SidelobeLevel sl =
      closest_sidelobe(pattern, signed_theta(ml), scenario.sidelobe_regions);
  m.closest_sidelobe_db = sl.level_db;
  m.sidelobe_is_local_max = sl.local_max;
  return m;
}

} // namespace sssta
