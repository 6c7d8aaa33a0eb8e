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
#include "sssta/problem_builder.hpp"

using namespace sssta;

namespace {

DesignScenario broadside() {
  DesignScenario s;
  s.mainlobe = {0.0, 90.0, 45.0, 100.0};
  s.sidelobe_regions = {{90.0, 10.0, 90.0, 1.0}, {-90.0, 10.0, 90.0, 1.0}};
  s.M = 21;
  return s;
}

} // namespace

TEST_SUITE("problem_builder") {

TEST_CASE("broadside sampling count") {
  const auto p = sample_scenario(broadside());
  CHECK(p.samples() == 163);
  CHECK(p.groups() == 63);
  CHECK(p.reference(0) == cd(1.0, 0.0));
  CHECK(p.reference.tail(162).norm() == 0.0);
  CHECK(p.sources[0].theta == 0.0);
}

TEST_CASE("first off-broadside example sampling count") {
  DesignScenario s;
  s.mainlobe = {60.0, 90.0, 55.0, 100.0};
  s.alpha = 0.75;
  s.sidelobe_regions = {{90.0, 0.0, 50.0, 1.0}, {90.0, 70.0, 90.0, 1.0}, {-90.0, 0.0, 90.0, 1.0}};
  CHECK(sample_scenario(s).samples() == 164);
}

TEST_CASE("degenerate region gives one sample") {
  AngularRegion r{90.0, 0.0, 0.0, 1.0};
  CHECK(r.thetas().size() == 1);
  DesignScenario s = broadside();
  s.mainlobe.theta = 30.0;
  s.sidelobe_regions = {r};
  CHECK(sample_scenario(s).samples() == 2);
}

TEST_CASE("steering rows are full steering vectors") {
  const auto p = sample_scenario(broadside());
  for (int l : {0, 5, 100, 162}) {
    const Eigen::VectorXcd row = full_steering(p.grid, p.sources[l], p.sign);
    CHECK((p.steering.row(l).transpose() - row).norm() == 0.0);
  }
}

TEST_CASE("scenario validation") {
  DesignScenario s = broadside();
  s.mainlobe.theta = 20.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = broadside();
  s.alpha = -0.1;
  CHECK_THROWS(s.validate());
  s = broadside();
  s.d_a = 0.0;
  CHECK_THROWS(s.validate());
  s = broadside();
  s.sidelobe_regions.clear();
  CHECK_THROWS(s.validate());
}

TEST_CASE("structure of the lifted problem") {
  Eigen::MatrixXcd S(1, 3);
  S << cd(1.0, 2.0), cd(-0.5, 0.25), cd(0.0, -3.0);
  const auto lp = lift(S, Eigen::VectorXcd::Ones(1), 0.1);
  Eigen::VectorXd c(9);
  c << 1, 0, 0, 1, 0, 0, 1, 0, 0;
  CHECK(lp.c_hat == c);
  CHECK(lp.S_hat.rows() == 2);
  CHECK(lp.S_hat.cols() == 9);
  for (int g = 0; g < 3; ++g) {
    CHECK(lp.S_hat.col(3 * g).norm() == 0.0);
    CHECK(lp.S_hat(0, 3 * g + 1) == S(0, g).real());
    CHECK(lp.S_hat(1, 3 * g + 1) == S(0, g).imag());
    CHECK(lp.S_hat(0, 3 * g + 2) == -S(0, g).imag());
    CHECK(lp.S_hat(1, 3 * g + 2) == S(0, g).real());
  }
}

TEST_CASE("reweights enter the q entries") {
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Ones(2, 4);
  const auto lp = lift(S, Eigen::VectorXcd::Zero(2), 0.0, Eigen::VectorXd::Constant(4, 2.0));
  for (int g = 0; g < 4; ++g) {
    CHECK(lp.c_hat(3 * g) == 2.0);
    CHECK(lp.c_hat(3 * g + 1) == 0.0);
  }
  CHECK(lp.group_weights() == Eigen::VectorXd::Constant(4, 2.0));
  CHECK_THROWS(lift(S, Eigen::VectorXcd::Zero(2), 0.0, Eigen::VectorXd::Zero(4)));
  CHECK_THROWS(lift(S, Eigen::VectorXcd::Zero(3), 0.0));
}

TEST_CASE("lifting preserves residual norms") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXcd S = oracle::random_complex(rng, 7, 12);
    const Eigen::VectorXcd p = oracle::random_complex(rng, 7, 1);
    const Eigen::VectorXcd v = oracle::random_complex(rng, 12, 1);
    const auto lp = lift(S, p, 0.5);
    const Eigen::VectorXd w = lift_coefficients(v);
    const double lifted = (lp.p_hat - lp.S_hat * w).norm();
    CHECK(std::abs(lifted - (p - S * v).norm()) <= 1e-12);
    const Eigen::VectorXcd Sv = S * v;
    const Eigen::VectorXd Sw = lp.S_hat * w;
    CHECK((Sw.head(7) - Sv.real()).norm() <= 1e-12);
    CHECK((Sw.tail(7) - Sv.imag()).norm() <= 1e-12);
    CHECK((reconstruct_complex(w) - v).norm() == 0.0);
  }
}

}
