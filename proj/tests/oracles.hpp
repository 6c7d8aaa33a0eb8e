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

// Reference computations written independently of the library internals.

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

inline double rad(double deg) { return deg * kPi / 180.0; }

// Polarization terms written out component by component; y_sign = -1 as printed.
inline Eigen::Vector3cd polarization(double theta, double phi, double gamma, double eta,
                                     double y_sign = -1.0) {
  const cd e = std::polar(1.0, rad(eta));
  const double st = std::sin(rad(theta)), ct = std::cos(rad(theta));
  const double sp = std::sin(rad(phi)), cp = std::cos(rad(phi));
  const double sg = std::sin(rad(gamma)), cg = std::cos(rad(gamma));
  return {sg * ct * cp * e - cg * sp, sg * ct * sp * e + y_sign * cg * cp, -sg * st * e};
}

inline cd phase(double position, double theta, double phi) {
  return std::polar(1.0, -2.0 * kPi * position * std::sin(rad(theta)) * std::sin(rad(phi)));
}

// 3 x M matrix of steering entries, row = orientation.
inline MatrixXcd steering_block(const std::vector<double> &positions, double theta, double phi,
                                double gamma, double eta) {
  const Eigen::Vector3cd pol = polarization(theta, phi, gamma, eta);
  MatrixXcd out(3, static_cast<Eigen::Index>(positions.size()));
  for (std::size_t m = 0; m < positions.size(); ++m)
    out.col(static_cast<Eigen::Index>(m)) = pol * phase(positions[m], theta, phi);
  return out;
}

inline MatrixXcd random_complex(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      m(i, j) = cd(n(rng), n(rng));
  return m;
}

inline MatrixXd random_real(std::mt19937_64 &rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      m(i, j) = n(rng);
  return m;
}

// Sigma = inv(diag(a) + S'S / s2), mean = Sigma S' P / s2, by explicit inversion.
struct DensePosterior {
  MatrixXd covariance;
  MatrixXd mean;
};

inline DensePosterior dense_posterior(const MatrixXd &S, const MatrixXd &P, const VectorXd &a,
                                      double s2) {
  MatrixXd H = S.transpose() * S / s2;
  H.diagonal() += a;
  DensePosterior out;
  out.covariance = H.fullPivLu().inverse();
  out.mean = out.covariance * S.transpose() * P / s2;
  return out;
}

/// Equality-constrained least squares by the full KKT matrix:
/// minimize ||p - S v|| subject to s_row v = 1, over complex v.
inline VectorXcd dense_kkt(const MatrixXcd &S, const VectorXcd &p, Eigen::Index row) {
  const Eigen::Index L = S.rows(), n = S.cols();
  MatrixXd A(2 * L, 2 * n);
  A << S.real(), -S.imag(), S.imag(), S.real();
  VectorXd b(2 * L);
  b << p.real(), p.imag();
  MatrixXd C(2, 2 * n);
  C.row(0) = A.row(row);
  C.row(1) = A.row(L + row);
  MatrixXd K = MatrixXd::Zero(2 * n + 2, 2 * n + 2);
  K.topLeftCorner(2 * n, 2 * n) = A.transpose() * A;
  K.topRightCorner(2 * n, 2) = C.transpose();
  K.bottomLeftCorner(2, 2 * n) = C;
  VectorXd rhs(2 * n + 2);
  rhs << A.transpose() * b, 1.0, 0.0;
  const VectorXd sol = K.fullPivLu().solve(rhs);
  VectorXcd v(n);
  for (Eigen::Index k = 0; k < n; ++k)
    v(k) = cd(sol(k), sol(n + k));
  return v;
}

/// Primal log-barrier Newton method for
///   minimize sum_g c_g |v_g|  subject to  ||p - S v|| <= alpha
/// on a fixed support, started from a strictly feasible point.
/// Returns +inf when no strictly feasible start exists.
inline double restricted_group_l1(const MatrixXcd &S, const VectorXcd &p, const VectorXd &c,
                                  double alpha) {
  const Eigen::Index L = S.rows(), k = S.cols();
  MatrixXd A(2 * L, 2 * k);
  for (Eigen::Index g = 0; g < k; ++g) {
    A.col(2 * g) << S.col(g).real(), S.col(g).imag();
    A.col(2 * g + 1) << -S.col(g).imag(), S.col(g).real();
  }
  VectorXd b(2 * L);
  b << p.real(), p.imag();

  const VectorXd v0 = A.colPivHouseholderQr().solve(b);
  if ((b - A * v0).norm() >= alpha * (1.0 - 1e-9))
    return std::numeric_limits<double>::infinity();

  // x = [v (2k); t (k)]
  const Eigen::Index n = 3 * k;
  VectorXd x(n);
  x.head(2 * k) = v0;
  for (Eigen::Index g = 0; g < k; ++g)
    x(2 * k + g) = v0.segment(2 * g, 2).norm() + 1.0;

  auto feasible = [&](const VectorXd &y) {
    for (Eigen::Index g = 0; g < k; ++g)
      if (y(2 * k + g) <= y.segment(2 * g, 2).norm())
        return false;
    return (b - A * y.head(2 * k)).squaredNorm() < alpha * alpha;
  };
  auto barrier = [&](const VectorXd &y, double tau) {
    double f = tau * c.dot(y.tail(k));
    for (Eigen::Index g = 0; g < k; ++g)
      f -= std::log(y(2 * k + g) * y(2 * k + g) - y.segment(2 * g, 2).squaredNorm());
    f -= std::log(alpha * alpha - (b - A * y.head(2 * k)).squaredNorm());
    return f;
  };

  const double nu = 2.0 * static_cast<double>(k + 1);
  double tau = nu / std::max(c.dot(x.tail(k)), 1e-12);
  const MatrixXd AtA = A.transpose() * A;
  for (int outer = 0; outer < 60; ++outer) {
    for (int it = 0; it < 200; ++it) {
      VectorXd grad = VectorXd::Zero(n);
      MatrixXd H = MatrixXd::Zero(n, n);
      grad.tail(k) = tau * c;
      for (Eigen::Index g = 0; g < k; ++g) {
        const Eigen::Vector2d v = x.segment(2 * g, 2);
        const double t = x(2 * k + g);
        const double f = t * t - v.squaredNorm();
        Eigen::Vector3d df(-2.0 * v(0), -2.0 * v(1), 2.0 * t);
        const Eigen::Index idx[3] = {2 * g, 2 * g + 1, 2 * k + g};
        const Eigen::Vector3d d2(-2.0, -2.0, 2.0);
        for (int i = 0; i < 3; ++i) {
          grad(idx[i]) -= df(i) / f;
          for (int j = 0; j < 3; ++j)
            H(idx[i], idx[j]) += df(i) * df(j) / (f * f);
          H(idx[i], idx[i]) -= d2(i) / f;
        }
      }
      const VectorXd r = b - A * x.head(2 * k);
      const double h = alpha * alpha - r.squaredNorm();
      const VectorXd dh = 2.0 * A.transpose() * r;
      grad.head(2 * k) -= dh / h;
      H.topLeftCorner(2 * k, 2 * k) += dh * dh.transpose() / (h * h) + 2.0 * AtA / h;

      const VectorXd step = -H.ldlt().solve(grad);
      const double decrement = -grad.dot(step);
      if (decrement / 2.0 < 1e-14)
        break;
      double s = 1.0;
      const double f0 = barrier(x, tau);
      while (s > 1e-16) {
        const VectorXd y = x + s * step;
        if (feasible(y) && barrier(y, tau) <= f0 - 0.25 * s * decrement)
          break;
        s *= 0.5;
      }
      x += s * step;
    }
    if (nu / tau < 1e-10)
      break;
    tau *= 25.0;
  }
  double obj = 0.0;
  for (Eigen::Index g = 0; g < k; ++g)
    obj += c(g) * x.segment(2 * g, 2).norm();
  return obj;
}

/// Minimum of sum_g c_g |v_g| over every nonempty group support, each solved
/// by the barrier method above.
inline double support_enumeration(const MatrixXcd &S, const VectorXcd &p, const VectorXd &c,
                                  double alpha) {
  if (p.norm() <= alpha)
    return 0.0;
  const Eigen::Index G = S.cols();
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << G); ++mask) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index g = 0; g < G; ++g)
      if (mask & (1u << g))
        cols.push_back(g);
    MatrixXcd sub(S.rows(), static_cast<Eigen::Index>(cols.size()));
    VectorXd csub(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      sub.col(static_cast<Eigen::Index>(i)) = S.col(cols[i]);
      csub(static_cast<Eigen::Index>(i)) = c(cols[i]);
    }
    best = std::min(best, restricted_group_l1(sub, p, csub, alpha));
  }
  return best;
}

} // namespace oracle
