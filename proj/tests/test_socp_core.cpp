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

#include "oracles.hpp"
#include "sssta/socp_core.hpp"

using namespace sssta;

TEST_SUITE("socp_core") {

TEST_CASE("loose tolerance gives the zero solution") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXcd S = oracle::random_complex(rng, 4, 6);
  Eigen::VectorXcd p = oracle::random_complex(rng, 4, 1);
  const auto sol = solve_socp(lift(S, p, p.norm() * 1.01));
  CHECK(sol.status == SocpStatus::Optimal);
  CHECK(sol.complex_weights.norm() == 0.0);
  CHECK(sol.objective == 0.0);

  p.setZero();
  const auto zero = solve_socp(lift(S, p, 0.1));
  CHECK(zero.status == SocpStatus::Optimal);
  CHECK(zero.complex_weights.norm() == 0.0);
}

TEST_CASE("unreachable tolerance is infeasible") {
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(3, 3);
  S(0, 0) = 1.0;
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(3);
  p(1) = 1.0;
  const auto lp = lift(S, p, 0.5);
  CHECK(least_squares_residual(lp) == doctest::Approx(1.0));
  CHECK(solve_socp(lp).status == SocpStatus::Infeasible);
}

TEST_CASE("matches exhaustive support enumeration") {
  std::mt19937_64 rng(77);
  const double alpha = 0.3;
  for (int trial = 0; trial < 25; ++trial) {
    CAPTURE(trial);
    const Eigen::MatrixXcd S = oracle::random_complex(rng, 5, 9);
    const Eigen::VectorXcd p = oracle::random_complex(rng, 5, 1);
    const Eigen::VectorXd c = (oracle::random_real(rng, 9, 1).array().abs() + 0.5).matrix();
    const auto sol = solve_socp(lift(S, p, alpha, c));
    REQUIRE(sol.status == SocpStatus::Optimal);
    const double objective = c.dot(group_magnitudes(sol.complex_weights));
    const double expect = oracle::support_enumeration(S, p, c, alpha);
    CHECK(std::abs(objective - expect) <= 1e-5 * std::max(1.0, expect));
    CHECK((p - S * sol.complex_weights).norm() <= alpha + 1e-8);
  }
}

TEST_CASE("active group selection") {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(6);
  v(1) = cd(0.0, 2.0);
  v(3) = 1e-7;
  v(5) = cd(0.6, 0.8);
  CHECK(group_magnitudes(v)(1) == doctest::Approx(2.0));
  CHECK(active_group_indices(v, 1e-6) == std::vector<int>{1, 5});
  CHECK(active_group_indices(v, 1e-9) == std::vector<int>{1, 3, 5});
  CHECK(active_group_indices(Eigen::VectorXcd::Zero(4), 1e-6).empty());

  SocpSolution sol;
  sol.complex_weights = v;
  const auto groups = active_groups(sol, 1e-6);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0] == std::pair<int, Axis>{0, Axis::Y});
  CHECK(groups[1] == std::pair<int, Axis>{1, Axis::Z});
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.feastol = -1.0;
  CHECK_THROWS(cfg.validate());
}

}
