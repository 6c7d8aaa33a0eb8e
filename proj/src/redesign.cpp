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

#include "sssta/redesign.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/QR>

#include "sssta/errors.hpp"

namespace sssta {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kRankTol = 1e-10;

} // namespace

Eigen::MatrixXcd placement_steering(const std::vector<DipolePlacement> &placements,
                                    const std::vector<SourceState> &sources,
                                    PolarizationSign sign) {
  Eigen::MatrixXcd S(static_cast<Index>(sources.size()), static_cast<Index>(placements.size()));
  for (std::size_t r = 0; r < sources.size(); ++r)
    for (std::size_t c = 0; c < placements.size(); ++c)
      S(static_cast<Index>(r), static_cast<Index>(c)) =
          steering_component(placements[c].position, placements[c].orientation, sources[r], sign);
  return S;
}

Eigen::VectorXcd constrained_fit(const Eigen::MatrixXcd &S, const Eigen::VectorXcd &p,
                                 int mainlobe_row, const std::vector<bool> &mask) {
  if (static_cast<Index>(mask.size()) != S.cols() || p.size() != S.rows())
    throw std::invalid_argument("redesign dimensions do not match");
  if (mainlobe_row < 0 || mainlobe_row >= S.rows())
    throw std::invalid_argument("mainlobe row out of range");

  std::vector<Index> cols;
  for (Index c = 0; c < S.cols(); ++c)
    if (mask[static_cast<std::size_t>(c)])
      cols.push_back(c);
  const Index n = static_cast<Index>(cols.size());
  if (n == 0)
    throw SolverError("redesign mask selects no dipoles");

  const Index L = S.rows();
  MatrixXd A(2 * L, 2 * n);
  for (Index k = 0; k < n; ++k) {
    const auto col = S.col(cols[static_cast<std::size_t>(k)]);
    A.col(k) << col.real(), col.imag();
    A.col(n + k) << -col.imag(), col.real();
  }
  VectorXd b(2 * L);
  b << p.real(), p.imag();
  MatrixXd C(2, 2 * n);
  C.row(0) = A.row(mainlobe_row);
  C.row(1) = A.row(L + mainlobe_row);
  const Eigen::Vector2d d(1.0, 0.0);

  // Null-space method on the two real constraint rows.
  Eigen::HouseholderQR<MatrixXd> qr(C.transpose());
  const MatrixXd Q = qr.householderQ() * MatrixXd::Identity(2 * n, 2 * n);
  const Eigen::Matrix2d R = qr.matrixQR().topLeftCorner(2, 2).triangularView<Eigen::Upper>();
  const double scale = std::max(C.norm(), 1.0);
  if (std::abs(R(0, 0)) <= kRankTol * scale || std::abs(R(1, 1)) <= kRankTol * scale)
    throw SolverError("mainlobe response is unreachable with the given dipoles");
  const VectorXd x0 = Q.leftCols(2) * R.transpose().triangularView<Eigen::Lower>().solve(d);
  VectorXd x = x0;
  if (2 * n > 2) {
    const MatrixXd Z = Q.rightCols(2 * n - 2);
    const MatrixXd AZ = A * Z;
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod;
    cod.setThreshold(kRankTol);
    cod.compute(AZ);
    const VectorXd y = cod.solve(b - A * x0);
    x += Z * y;
  }

  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(S.cols());
  for (Index k = 0; k < n; ++k)
    v(cols[static_cast<std::size_t>(k)]) = cd(x(k), x(n + k));
  return v;
}

std::vector<DipolePlacement> redesign_weights(std::vector<DipolePlacement> placements,
                                              const SampledProblem &problem) {
  if (placements.empty())
    throw SolverError("redesign needs at least one dipole");
  const Eigen::MatrixXcd S = placement_steering(placements, problem.sources, problem.sign);
  const Eigen::VectorXcd v =
      constrained_fit(S, problem.reference, 0, std::vector<bool>(placements.size(), true));
  for (std::size_t k = 0; k < placements.size(); ++k)
    placements[k].weight = std::conj(v(static_cast<Index>(k)));
  return placements;
}

DesignReport design_ula(const DesignScenario &scenario, double spacing) {
  scenario.validate();
  if (!(spacing > 0.0))
    throw ConfigError("ULA spacing must be positive");
  const double ratio = scenario.aperture / spacing;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("aperture must be an integer multiple of the ULA spacing");
  const auto t0 = std::chrono::steady_clock::now();

  const int count = static_cast<int>(std::round(ratio)) + 1;
  const SampledProblem problem = sample_scenario(scenario);
  std::vector<DipolePlacement> all;
  for (int k = 0; k < count; ++k)
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z})
      all.push_back({k * spacing, axis, {}});

  const Eigen::MatrixXcd S = placement_steering(all, problem.sources, problem.sign);
  const Eigen::VectorXcd v_full =
      constrained_fit(S, problem.reference, 0, std::vector<bool>(all.size(), true));

  std::vector<bool> mask(all.size(), false);
  for (int k = 0; k < count; ++k) {
    int best = 3 * k;
    for (int f = 1; f < 3; ++f)
      if (std::abs(v_full(3 * k + f)) > std::abs(v_full(best)))
        best = 3 * k + f;
    mask[static_cast<std::size_t>(best)] = true;
  }
  const Eigen::VectorXcd v = constrained_fit(S, problem.reference, 0, mask);

  DesignReport report;
  report.method = Method::Ula;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!mask[i])
      continue;
    DipolePlacement pruned = all[i];
    pruned.weight = std::conj(v_full(static_cast<Index>(i)));
    report.initial_placements.push_back(pruned);
    pruned.weight = std::conj(v(static_cast<Index>(i)));
    report.placements.push_back(pruned);
  }
  report.iterations = 2;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

} // namespace sssta
