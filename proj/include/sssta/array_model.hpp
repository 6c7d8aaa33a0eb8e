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

#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sssta {

using cd = std::complex<double>;

constexpr double kPi = std::numbers::pi;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }

enum class Axis : int { X = 0, Y = 1, Z = 2 };

std::string to_string(Axis axis);
Axis axis_from_string(const std::string &name);

// Sign of the cos(gamma)cos(phi) term in the y component of the polarization vector.
enum class PolarizationSign { AsPrinted, Textbook };

std::string to_string(PolarizationSign sign);
PolarizationSign polarization_sign_from_string(const std::string &name);

/// Direction and polarization of a plane wave, all angles in degrees.
struct SourceState {
  double theta = 0.0;
  double phi = 90.0;
  double gamma = 0.0;
  double eta = 0.0;

  /// Throws std::invalid_argument when theta, gamma or eta leave their ranges.
  void validate() const;
};

/// Uniform line of candidate locations, in wavelengths.
struct SamplingGrid {
  double origin = 0.0;
  double spacing = 0.5;
  int count = 1;

  double position(int m) const { return origin + m * spacing; }
  double span() const { return (count - 1) * spacing; }
  void validate() const;
};

/// One dipole of a stretched tripole array.
///
/// `weight` is the stored beamformer coefficient. It enters the response
/// conjugated, so a placement contributes steering * conj(weight). Solver
/// vectors elsewhere in the library hold the effective coefficient
/// conj(weight) directly, so that p = S * v.
struct DipolePlacement {
  double position = 0.0;
  Axis orientation = Axis::X;
  cd weight{0.0, 0.0};
};

Eigen::VectorXcd spatial_steering(const SamplingGrid &grid, const SourceState &src);

Eigen::Vector3cd polarization_vector(const SourceState &src,
                                     PolarizationSign sign = PolarizationSign::AsPrinted);

// Interleaved per location as [x0, y0, z0, x1, y1, z1, ...].
Eigen::VectorXcd full_steering(const SamplingGrid &grid, const SourceState &src,
                               PolarizationSign sign = PolarizationSign::AsPrinted);

// Steering entry of a single dipole at an arbitrary position.
cd steering_component(double position, Axis axis, const SourceState &src,
                      PolarizationSign sign = PolarizationSign::AsPrinted);

cd response(const std::vector<DipolePlacement> &placements, const SourceState &src,
            PolarizationSign sign = PolarizationSign::AsPrinted);

} // namespace sssta
