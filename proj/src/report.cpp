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

#include "sssta/report.hpp"

#include <array>
#include <utility>

#include "sssta/errors.hpp"

namespace sssta {

namespace {

constexpr std::array<std::pair<Method, const char *>, 4> kMethods{{
    {Method::CsImdsm, "cs-imdsm"},
    {Method::BcsImdsm, "bcs-imdsm"},
    {Method::Airms, "airms"},
    {Method::Ula, "ula"},
}};

constexpr std::array<std::pair<DesignStatus, const char *>, 3> kStatuses{{
    {DesignStatus::Ok, "ok"},
    {DesignStatus::NoSolution, "no-solution"},
    {DesignStatus::SolverFailure, "solver-failure"},
}};

constexpr double kTol = 1e-9;

} // namespace

std::string to_string(Method method) {
  for (const auto &[m, name] : kMethods)
    if (m == method)
      return name;
  return "unknown";
}

Method method_from_string(const std::string &name) {
  for (const auto &[m, n] : kMethods)
    if (name == n)
      return m;
  throw ConfigError("unknown method '" + name + "'");
}

std::string to_string(DesignStatus status) {
  for (const auto &[s, name] : kStatuses)
    if (s == status)
      return name;
  return "unknown";
}

DesignStatus design_status_from_string(const std::string &name) {
  for (const auto &[s, n] : kStatuses)
    if (name == n)
      return s;
  throw ConfigError("unknown status '" + name + "'");
}

bool is_sst_feasible(const std::vector<DipolePlacement> &placements, double d_a, double aperture) {
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const double pos = placements[i].position;
    if (pos < -kTol || pos > aperture + kTol)
      return false;
    if (i > 0 && pos - placements[i - 1].position < d_a - kTol)
      return false;
  }
  return true;
}

} // namespace sssta
