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

#include "sssta/soc_cone.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sssta::soc {

double det(CRef x) {
  const double n = x.tail(x.size() - 1).norm();
  return (x(0) - n) * (x(0) + n);
}

double min_eig(CRef x) { return x(0) - x.tail(x.size() - 1).norm(); }

NtScaling NtScaling::identity(Eigen::Index n) {
  NtScaling w;
  w.wbar = Vec::Zero(n);
  w.wbar(0) = 1.0;
  w.eta = 1.0;
  return w;
}

NtScaling NtScaling::compute(CRef s, CRef y) {
  const double ds = det(s), dy = det(y);
  if (!(ds > 0.0) || !(dy > 0.0))
    throw std::domain_error("scaling point left the cone interior");
  const double ns = std::sqrt(ds), ny = std::sqrt(dy);
  const Vec sb = s / ns;
  Vec yb = y / ny;
  const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(yb)));
  yb.tail(yb.size() - 1) *= -1.0;

  // w satisfies (2ww' - J) ybar = sbar; wbar is its square root point.
  Vec wv = (sb + yb) / (2.0 * gamma);
  NtScaling w;
  w.wbar = wv / std::sqrt(2.0 * (wv(0) + 1.0));
  w.wbar(0) += 1.0 / std::sqrt(2.0 * (wv(0) + 1.0));
  w.eta = std::sqrt(ns / ny);
  return w;
}

void NtScaling::apply(CRef x, Ref out) const {
  // eta (2 wbar (wbar' x) - J x)
  const double c = 2.0 * wbar.dot(x);
  out = c * wbar;
  out(0) -= x(0);
  out.tail(x.size() - 1) += x.tail(x.size() - 1);
  out *= eta;
}

void NtScaling::apply_inverse(CRef x, Ref out) const {
  // eta^-1 (2 J wbar (wbar' J x) - J x)
  const Eigen::Index n = x.size() - 1;
  const double c = 2.0 * (wbar(0) * x(0) - wbar.tail(n).dot(x.tail(n)));
  out(0) = c * wbar(0) - x(0);
  out.tail(n) = -c * wbar.tail(n) + x.tail(n);
  out /= eta;
}

Eigen::MatrixXd NtScaling::matrix() const {
  const Eigen::Index n = wbar.size();
  Eigen::MatrixXd W = 2.0 * wbar * wbar.transpose();
  W(0, 0) -= 1.0;
  for (Eigen::Index i = 1; i < n; ++i)
    W(i, i) += 1.0;
  return eta * W;
}

Eigen::MatrixXd NtScaling::inverse_matrix() const {
  const Eigen::Index n = wbar.size();
  Vec jw = wbar;
  jw.tail(n - 1) *= -1.0;
  Eigen::MatrixXd W = 2.0 * jw * jw.transpose();
  W(0, 0) -= 1.0;
  for (Eigen::Index i = 1; i < n; ++i)
    W(i, i) += 1.0;
  return W / eta;
}

Vec jordan_product(CRef x, CRef y) {
  const Eigen::Index n = x.size() - 1;
  Vec out(x.size());
  out(0) = x.dot(y);
  out.tail(n) = x(0) * y.tail(n) + y(0) * x.tail(n);
  return out;
}

Vec jordan_solve(CRef lambda, CRef r) {
  const Eigen::Index n = lambda.size() - 1;
  Vec x(lambda.size());
  x(0) = (lambda(0) * r(0) - lambda.tail(n).dot(r.tail(n))) / det(lambda);
  x.tail(n) = (r.tail(n) - x(0) * lambda.tail(n)) / lambda(0);
  return x;
}

double max_step(CRef u, CRef d) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Eigen::Index n = u.size() - 1;
  const double c = det(u);
  if (!(c > 0.0) || u(0) <= 0.0)
    return 0.0;
  const double a = d(0) * d(0) - d.tail(n).squaredNorm();
  const double b = u(0) * d(0) - u.tail(n).dot(d.tail(n));
  const double scale = std::max(d.squaredNorm(), 1e-300);

  if (std::abs(a) <= 1e-14 * scale)
    return b < 0.0 ? -c / (2.0 * b) : inf;
  const double disc = b * b - a * c;
  if (disc < 0.0)
    return inf;
  const double q = -(b + std::copysign(std::sqrt(disc), b));
  double best = inf;
  if (q != 0.0) {
    const double r1 = q / a, r2 = c / q;
    if (r1 > 0.0)
      best = std::min(best, r1);
    if (r2 > 0.0)
      best = std::min(best, r2);
  } else if (-c / a > 0.0) {
    best = std::sqrt(-c / a);
  }
  return best;
}

} // namespace sssta::soc
