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
#include "sssta/placement_search.hpp"

using namespace sssta;

namespace {

DesignScenario broadside(int M) {
  DesignScenario s;
  s.mainlobe = {0.0, 90.0, 45.0, 100.0};
  s.sidelobe_regions = {{90.0, 10.0, 90.0, 1.0}, {-90.0, 10.0, 90.0, 1.0}};
  s.M = M;
  return s;
}

} // namespace

TEST_SUITE("placement_search") {

TEST_CASE("active entries are sorted by position") {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(9);
  v(7) = 1.0;
  v(2) = cd(0.0, 0.5);
  v(4) = 1e-9;
  const auto e = active_entries(v, {0.0, 0.5, 3}, 1e-6);
  REQUIRE(e.size() == 2);
  CHECK(e[0].position == 0.0);
  CHECK(e[0].orientation == Axis::Z);
  CHECK(e[1].position == 1.0);
  CHECK(e[1].orientation == Axis::Y);
}

TEST_CASE("first cluster") {
  const std::vector<ActiveEntry> active = {
      {0.30, Axis::X, 1.0}, {0.35, Axis::Y, 2.0}, {1.20, Axis::Z, 3.0}};
  for (auto rule : {ClusterRule::Chain, ClusterRule::Window}) {
    const auto c = first_cluster(active, 0.8, rule);
    REQUIRE(c.size() == 2);
    CHECK(c[0].position == 0.30);
    CHECK(c[1].position == 0.35);
  }
  CHECK(first_cluster({}, 0.8).empty());

  const std::vector<ActiveEntry> chain = {{0.0, Axis::X, 1.0}, {0.5, Axis::X, 1.0}, {1.0, Axis::X, 1.0}};
  CHECK(first_cluster(chain, 0.8, ClusterRule::Chain).size() == 3);
  CHECK(first_cluster(chain, 0.8, ClusterRule::Window).size() == 2);
}

TEST_CASE("merging a cluster") {
  const std::vector<ActiveEntry> cluster = {{0.25, Axis::X, cd(0.0, 3.0)}, {0.5, Axis::Z, 1.0}};
  const auto c = merge_and_fix(cluster, MergeRule::Centroid);
  CHECK(c.position == doctest::Approx(0.3125));
  CHECK(c.orientation == Axis::X);
  CHECK(c.weight == cd(0.0, -3.0));
  const auto s = merge_and_fix(cluster, MergeRule::Strongest);
  CHECK(s.position == 0.25);
  CHECK_THROWS(merge_and_fix({}));
}

TEST_CASE("resampling the remaining aperture") {
  ImdsmState st;
  auto g = resample(st, 101, 0.8, 10.0, 0.1);
  REQUIRE(g);
  CHECK(g->origin == 0.0);
  CHECK(g->spacing == doctest::Approx(0.1));

  st.fixed.push_back({0.4, Axis::X, 1.0});
  g = resample(st, 101, 0.8, 10.0, 0.1);
  REQUIRE(g);
  CHECK(g->origin == doctest::Approx(1.2));
  CHECK(g->spacing == doctest::Approx(0.088));
  CHECK(g->position(100) == doctest::Approx(10.0));

  st.fixed.push_back({9.5, Axis::X, 1.0});
  CHECK_FALSE(resample(st, 101, 0.8, 10.0, 0.1));
  CHECK_THROWS(resample(st, 1, 0.8, 10.0, 0.1));
}

TEST_CASE("residual reference subtracts the fixed response") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> th(0.0, 90.0);
  std::vector<SourceState> src;
  for (int k = 0; k < 6; ++k)
    src.push_back({th(rng), k % 2 ? 90.0 : -90.0, 45.0, 100.0});
  const Eigen::VectorXcd prev = oracle::random_complex(rng, 6, 1);
  const DipolePlacement d{2.3, Axis::Z, cd(0.4, 0.9)};
  const auto out = residual_reference(prev, d, src);
  for (int k = 0; k < 6; ++k) {
    const auto block = oracle::steering_block({2.3}, src[k].theta, src[k].phi, 45.0, 100.0);
    CHECK(std::abs(out(k) - (prev(k) - block(2, 0) * std::conj(d.weight))) <= 1e-12);
  }
  CHECK_THROWS(residual_reference(prev.head(3), d, src));
}

TEST_CASE("loose tolerance gives no dipoles") {
  DesignScenario s = broadside(21);
  s.alpha = 1.0;
  const auto r = run_imdsm(s, Method::CsImdsm);
  CHECK(r.placements.empty());
}

TEST_CASE("CS search yields a feasible design") {
  const DesignScenario s = broadside(101);
  const auto r = run_imdsm(s, Method::CsImdsm);
  REQUIRE(r.status == DesignStatus::Ok);
  CHECK(is_sst_feasible(r.placements, s.d_a, s.aperture));
  CHECK(r.iterations <= static_cast<int>(std::ceil(s.aperture / s.d_a)) + 1);
  CHECK(r.initial_placements.size() == r.placements.size());
}

TEST_CASE("rule names round trip") {
  for (auto r : {MergeRule::Centroid, MergeRule::Strongest})
    CHECK(merge_rule_from_string(to_string(r)) == r);
  for (auto r : {ClusterRule::Chain, ClusterRule::Window})
    CHECK(cluster_rule_from_string(to_string(r)) == r);
  CHECK_THROWS(merge_rule_from_string("mean"));
}

}
