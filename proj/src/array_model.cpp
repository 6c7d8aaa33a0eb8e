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

#include "sssta/array_model.hpp"

#include <cmath>
#include <stdexcept>

namespace sssta {

namespace {

const cd kJ{0.0, 1.0};

cd spatial_phase(double position, const SourceState &src) {
  const double arg =
      -2.0 * kPi * position * std::sin(deg2rad(src.theta)) * std::sin(deg2rad(src.phi));
  return {std::cos(arg), std::sin(arg)};
}

} // namespace

std::string to_string(Axis axis) {
  switch (axis) {
  case Axis::X:
    return "x";
  case Axis::Y:
    return "y";
  case Axis::Z:
    return "z";
  }
  throw std::invalid_argument("unknown axis");
}

Axis axis_from_string(const std::string &name) {
  if (name == "x" || name == "X")
    return Axis::X;
  if (name == "y" || name == "Y")
    return Axis::Y;
  if (name == "z" || name == "Z")
    return Axis::Z;
  throw std::invalid_argument("unknown orientation '" + name + "'");
}

std::string to_string(PolarizationSign sign) {
  return sign == PolarizationSign::AsPrinted ? "as-printed" : "textbook";
}

PolarizationSign polarization_sign_from_string(const std::string &name) {
  if (name == "as-printed")
    return PolarizationSign::AsPrinted;
  if (name == "textbook")
    return PolarizationSign::Textbook;
  throw std::invalid_argument("unknown polarization sign convention '" + name + "'");
}

void SourceState::validate() const {
  if (!(theta >= 0.0 && theta <= 90.0))
    throw std::invalid_argument("theta must lie in [0, 90] degrees");
  if (!(gamma >= 0.0 && gamma <= 90.0))
    throw std::invalid_argument("gamma must lie in [0, 90] degrees");
  if (!(eta >= -180.0 && eta < 180.0))
    throw std::invalid_argument("eta must lie in [-180, 180) degrees");
  if (!std::isfinite(phi))
    throw std::invalid_argument("phi must be finite");
}

void SamplingGrid::validate() const {
  if (count < 1)
    throw std::invalid_argument("grid count must be positive");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw std::invalid_argument("grid spacing must be positive");
  if (!std::isfinite(origin))
    throw std::invalid_argument("grid origin must be finite");
}

Eigen::VectorXcd spatial_steering(const SamplingGrid &grid, const SourceState &src) {
  Eigen::VectorXcd s(grid.count);
  for (int m = 0; m < grid.count; ++m)
    s(m) = spatial_phase(grid.position(m), src);
  return s;
}

Eigen::Vector3cd polarization_vector(const SourceState &src, PolarizationSign sign) {
  const double th = deg2rad(src.theta), ph = deg2rad(src.phi);
  const double ga = deg2rad(src.gamma), et = deg2rad(src.eta);
  const cd e = std::exp(kJ * et);
  const double sg = std::sin(ga), cg = std::cos(ga);
  const double y_sign = sign == PolarizationSign::AsPrinted ? -1.0 : 1.0;

  Eigen::Vector3cd p;
  p(0) = sg * std::cos(th) * std::cos(ph) * e - cg * std::sin(ph);
  p(1) = sg * std::cos(th) * std::sin(ph) * e + y_sign * cg * std::cos(ph);
  p(2) = -sg * std::sin(th) * e;
  return p;
}

Eigen::VectorXcd full_steering(const SamplingGrid &grid, const SourceState &src,
                               PolarizationSign sign) {
  const Eigen::Vector3cd pol = polarization_vector(src, sign);
  const Eigen::VectorXcd sp = spatial_steering(grid, src);
  Eigen::VectorXcd s(3 * grid.count);
  for (int m = 0; m < grid.count; ++m)
    s.segment<3>(3 * m) = pol * sp(m);
  return s;
}

cd steering_component(double position, Axis axis, const SourceState &src, PolarizationSign sign) {
  return polarization_vector(src, sign)(static_cast<int>(axis)) * spatial_phase(position, src);
}

cd response(const std::vector<DipolePlacement> &placements, const SourceState &src,
            PolarizationSign sign) {
  const Eigen::Vector3cd pol = polarization_vector(src, sign);
  cd p{0.0, 0.0};
  for (const auto &d : placements)
    p += pol(static_cast<int>(d.orientation)) * spatial_phase(d.position, src) * std::conj(d.weight);
  return p;
}

} // namespace sssta
