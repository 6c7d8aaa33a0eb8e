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

#include "sssta/problem_builder.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace sssta {

namespace {

constexpr double kAngleTol = 1e-9;

bool same_angle(double a, double b) { return std::abs(a - b) <= kAngleTol; }

} // namespace

void AngularRegion::validate() const {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("region step must be positive");
  if (!(theta_start >= 0.0 && theta_end <= 90.0 && theta_start <= theta_end))
    throw std::invalid_argument("region must satisfy 0 <= theta_start <= theta_end <= 90");
  if (!std::isfinite(phi))
    throw std::invalid_argument("region phi must be finite");
}

std::vector<double> AngularRegion::thetas() const {
  const int n = static_cast<int>(std::floor((theta_end - theta_start) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k)
    out[k] = theta_start + k * step;
  return out;
}

SamplingGrid DesignScenario::grid() const {
  return SamplingGrid{0.0, aperture / (M - 1), M};
}

void DesignScenario::validate() const {
  mainlobe.validate();
  if (M < 2)
    throw std::invalid_argument("M must be at least 2");
  if (!(aperture > 0.0) || !std::isfinite(aperture))
    throw std::invalid_argument("aperture must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0, 1]");
  if (!(d_a > 0.0) || !std::isfinite(d_a))
    throw std::invalid_argument("d_a must be positive");
  if (sidelobe_regions.empty())
    throw std::invalid_argument("at least one sidelobe region is required");
  for (const auto &r : sidelobe_regions) {
    r.validate();
    const bool inside = mainlobe.theta >= r.theta_start - kAngleTol &&
                        mainlobe.theta <= r.theta_end + kAngleTol;
    if (inside && (same_angle(r.phi, mainlobe.phi) || same_angle(mainlobe.theta, 0.0)))
      throw std::invalid_argument("mainlobe lies inside a sidelobe region");
  }
}

Eigen::MatrixXcd steering_matrix(const std::vector<SourceState> &sources, const SamplingGrid &grid,
                                 PolarizationSign sign) {
  Eigen::MatrixXcd S(static_cast<Eigen::Index>(sources.size()), 3 * grid.count);
  for (std::size_t l = 0; l < sources.size(); ++l)
    S.row(static_cast<Eigen::Index>(l)) = full_steering(grid, sources[l], sign).transpose();
  return S;
}

SampledProblem sample_scenario(const DesignScenario &scn) {
  scn.validate();
  SampledProblem out;
  out.grid = scn.grid();
  out.sign = scn.sign;

  std::set<std::pair<long long, long long>> seen;
  auto key = [](double theta, double phi) {
    return std::make_pair(std::llround(theta * 1e9), std::llround(phi * 1e9));
  };

  out.sources.push_back(scn.mainlobe);
  seen.insert(key(scn.mainlobe.theta, scn.mainlobe.phi));
  for (const auto &r : scn.sidelobe_regions) {
    for (double theta : r.thetas()) {
      if (!seen.insert(key(theta, r.phi)).second) {
        ++out.duplicates_removed;
        continue;
      }
      out.sources.push_back({theta, r.phi, scn.mainlobe.gamma, scn.mainlobe.eta});
    }
  }

  out.reference = Eigen::VectorXcd::Zero(out.samples());
  out.reference(0) = 1.0;
  out.steering = steering_matrix(out.sources, out.grid, out.sign);
  return out;
}

SampledProblem resample_problem(const SampledProblem &base, const SamplingGrid &grid) {
  SampledProblem out = base;
  out.grid = grid;
  out.steering = steering_matrix(out.sources, grid, out.sign);
  return out;
}

Eigen::VectorXd LiftedProblem::group_weights() const {
  Eigen::VectorXd d(groups());
  for (int g = 0; g < groups(); ++g)
    d(g) = c_hat(3 * g);
  return d;
}

LiftedProblem lift(const SampledProblem &problem, double alpha,
                   const std::optional<Eigen::VectorXd> &delta) {
  return lift(problem.steering, problem.reference, alpha, delta);
}

LiftedProblem lift(const Eigen::MatrixXcd &steering, const Eigen::VectorXcd &reference,
                   double alpha, const std::optional<Eigen::VectorXd> &delta) {
  const Eigen::Index L = steering.rows(), G = steering.cols();
  if (reference.size() != L)
    throw std::invalid_argument("reference length does not match steering rows");
  if (delta && delta->size() != G)
    throw std::invalid_argument("reweight vector length does not match group count");
  if (delta && (delta->array() <= 0.0).any())
    throw std::invalid_argument("reweights must be strictly positive");
  if (alpha < 0.0)
    throw std::invalid_argument("alpha must be non-negative");

  LiftedProblem lp;
  lp.alpha = alpha;
  lp.c_hat = Eigen::VectorXd::Zero(3 * G);
  lp.S_hat = Eigen::MatrixXd::Zero(2 * L, 3 * G);
  for (Eigen::Index g = 0; g < G; ++g) {
    lp.c_hat(3 * g) = delta ? (*delta)(g) : 1.0;
    const auto col = steering.col(g);
    lp.S_hat.col(3 * g + 1).head(L) = col.real();
    lp.S_hat.col(3 * g + 1).tail(L) = col.imag();
    lp.S_hat.col(3 * g + 2).head(L) = -col.imag();
    lp.S_hat.col(3 * g + 2).tail(L) = col.real();
  }
  lp.p_hat = split_complex(reference);
  return lp;
}

Eigen::VectorXd lift_coefficients(const Eigen::VectorXcd &v) {
  Eigen::VectorXd w(3 * v.size());
  for (Eigen::Index g = 0; g < v.size(); ++g)
    w.segment<3>(3 * g) << std::abs(v(g)), v(g).real(), v(g).imag();
  return w;
}

Eigen::VectorXcd reconstruct_complex(const Eigen::VectorXd &w_hat) {
  if (w_hat.size() % 3 != 0)
    throw std::invalid_argument("lifted vector length must be a multiple of 3");
  Eigen::VectorXcd v(w_hat.size() / 3);
  for (Eigen::Index g = 0; g < v.size(); ++g)
    v(g) = cd(w_hat(3 * g + 1), w_hat(3 * g + 2));
  return v;
}

Eigen::VectorXd split_complex(const Eigen::VectorXcd &x) {
  Eigen::VectorXd out(2 * x.size());
  out << x.real(), x.imag();
  return out;
}

} // namespace sssta
