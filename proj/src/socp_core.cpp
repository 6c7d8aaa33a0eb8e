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

#include "sssta/socp_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sssta/errors.hpp"
#include "sssta/soc_cone.hpp"

namespace sssta {

std::string to_string(SocpStatus status) {
  switch (status) {
  case SocpStatus::Optimal:
    return "optimal";
  case SocpStatus::Infeasible:
    return "infeasible";
  case SocpStatus::MaxIterations:
    return "max_iterations";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(feastol > 0.0 && abstol > 0.0 && reltol > 0.0 && zero_threshold > 0.0))
    throw std::invalid_argument("solver tolerances must be positive");
  if (max_iterations < 1)
    throw std::invalid_argument("max_iterations must be positive");
  if (refinement_steps < 0)
    throw std::invalid_argument("refinement_steps must be non-negative");
}

namespace {

using Eigen::Index;
using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Cone layout: residual cone of size 2L+1 first, then one 3-cone per group.
// Primal: G z + s = h, s in K. Dual: G' y + c = 0, y in K.
class ConicIpm {
public:
  ConicIpm(const LiftedProblem &lp, const SolverConfig &cfg)
      : cfg_(cfg), G_(lp.groups()), L2_(lp.rows()), n0_(L2_ + 1), N_(n0_ + 3 * G_) {
    Sx_.resize(L2_, 2 * G_);
    for (Index g = 0; g < G_; ++g) {
      Sx_.col(2 * g) = lp.S_hat.col(3 * g + 1);
      Sx_.col(2 * g + 1) = lp.S_hat.col(3 * g + 2);
    }
    c_ = lp.c_hat;
    h_ = VectorXd::Zero(N_);
    h_(0) = lp.alpha;
    h_.segment(1, L2_) = lp.p_hat;
    Wg_.resize(G_);
    Wginv_.resize(G_);
    D_.resize(G_);
  }

  SocpSolution run();

private:
  VectorXd mulG(const VectorXd &z) const {
    VectorXd out(N_);
    out(0) = 0.0;
    out.segment(1, L2_).noalias() = Sx_ * gather_x(z);
    out.tail(3 * G_) = -z;
    return out;
  }

  VectorXd mulGt(const VectorXd &y) const {
    const VectorXd r = Sx_.transpose() * y.segment(1, L2_);
    VectorXd out = -y.tail(3 * G_);
    for (Index g = 0; g < G_; ++g) {
      out(3 * g + 1) += r(2 * g);
      out(3 * g + 2) += r(2 * g + 1);
    }
    return out;
  }

  VectorXd gather_x(const VectorXd &z) const {
    VectorXd x(2 * G_);
    for (Index g = 0; g < G_; ++g) {
      x(2 * g) = z(3 * g + 1);
      x(2 * g + 1) = z(3 * g + 2);
    }
    return x;
  }

  VectorXd scatter_x(const VectorXd &x) const {
    VectorXd z = VectorXd::Zero(3 * G_);
    for (Index g = 0; g < G_; ++g) {
      z(3 * g + 1) = x(2 * g);
      z(3 * g + 2) = x(2 * g + 1);
    }
    return z;
  }

  void set_scaling_identity() {
    w0_ = soc::NtScaling::identity(n0_);
    for (Index g = 0; g < G_; ++g)
      Wg_[g] = Wginv_[g] = Matrix3d::Identity();
  }

  void set_scaling(const VectorXd &s, const VectorXd &y) {
    w0_ = soc::NtScaling::compute(s.head(n0_), y.head(n0_));
    for (Index g = 0; g < G_; ++g) {
      const Index o = n0_ + 3 * g;
      const soc::NtScaling w = soc::NtScaling::compute(s.segment<3>(o), y.segment<3>(o));
      Wg_[g] = w.matrix();
      Wginv_[g] = w.inverse_matrix();
    }
  }

  VectorXd mulW(const VectorXd &x, bool inverse) const {
    VectorXd out(N_);
    if (inverse)
      w0_.apply_inverse(x.head(n0_), out.head(n0_));
    else
      w0_.apply(x.head(n0_), out.head(n0_));
    for (Index g = 0; g < G_; ++g) {
      const Index o = n0_ + 3 * g;
      out.segment<3>(o) = (inverse ? Wginv_[g] : Wg_[g]) * x.segment<3>(o);
    }
    return out;
  }

  // H = G' W^-2 G = D + B' B with D = blockdiag(W_g^-2) and B = W_0^-1 [0; S_hat].
  // B has zero q columns, so q is eliminated per group and the reduced
  // 2G x 2G system is factored densely.
  bool factor() {
    const double eta = w0_.eta;
    const VectorXd w1 = w0_.wbar.tail(L2_);
    const Eigen::RowVectorXd r = -(w1.transpose() * Sx_);
    VectorXd u = w0_.wbar;
    u.tail(L2_) *= -1.0;
    Bx_.resize(n0_, 2 * G_);
    Bx_.noalias() = (2.0 / eta) * u * r;
    Bx_.bottomRows(L2_) += Sx_ / eta;

    MatrixXd Hx = MatrixXd::Zero(2 * G_, 2 * G_);
    Hx.selfadjointView<Eigen::Lower>().rankUpdate(Bx_.transpose());
    for (Index g = 0; g < G_; ++g) {
      D_[g] = Wginv_[g] * Wginv_[g];
      const Matrix3d &d = D_[g];
      const Eigen::Matrix2d schur =
          d.block<2, 2>(1, 1) - d.block<2, 1>(1, 0) * d.block<1, 2>(0, 1) / d(0, 0);
      Hx(2 * g, 2 * g) += schur(0, 0);
      Hx(2 * g + 1, 2 * g) += schur(1, 0);
      Hx(2 * g + 1, 2 * g + 1) += schur(1, 1);
    }
    Hllt_.compute(Hx);
    return Hllt_.info() == Eigen::Success;
  }

  VectorXd mulD(const VectorXd &x) const {
    VectorXd out(3 * G_);
    for (Index g = 0; g < G_; ++g)
      out.segment<3>(3 * g) = D_[g] * x.segment<3>(3 * g);
    return out;
  }

  VectorXd mulH(const VectorXd &x) const {
    const VectorXd bx = Bx_ * gather_x(x);
    return mulD(x) + scatter_x(Bx_.transpose() * bx);
  }

  VectorXd solveH_once(const VectorXd &r) const {
    VectorXd rx = gather_x(r);
    for (Index g = 0; g < G_; ++g) {
      const Matrix3d &d = D_[g];
      rx.segment<2>(2 * g) -= d.block<2, 1>(1, 0) * (r(3 * g) / d(0, 0));
    }
    const VectorXd zx = Hllt_.solve(rx);
    VectorXd z = scatter_x(zx);
    for (Index g = 0; g < G_; ++g) {
      const Matrix3d &d = D_[g];
      z(3 * g) = (r(3 * g) - d.block<1, 2>(0, 1).dot(zx.segment<2>(2 * g))) / d(0, 0);
    }
    return z;
  }

  VectorXd solveH(const VectorXd &r) const {
    VectorXd x = solveH_once(r);
    for (int it = 0; it < cfg_.refinement_steps; ++it)
      x += solveH_once(r - mulH(x));
    return x;
  }

  struct Step {
    VectorXd dz, dy, ds;
  };

  // G dz + ds = bs, G' dy = bx, W^-1 ds + W dy = t.
  Step newton(const VectorXd &bx, const VectorXd &bs, const VectorXd &t) const {
    Step st;
    const VectorXd winv_t = mulW(t, true);
    const VectorXd rhs = bx + mulGt(mulW(mulW(bs, true), true) - winv_t);
    st.dz = solveH(rhs);
    st.dy = mulW(mulW(mulG(st.dz) - bs, true), true) + winv_t;
    st.ds = bs - mulG(st.dz);
    return st;
  }

  template <class Fn> void for_each_cone(Fn &&fn) const {
    fn(Index{0}, n0_);
    for (Index g = 0; g < G_; ++g)
      fn(n0_ + 3 * g, Index{3});
  }

  double max_step(const VectorXd &u, const VectorXd &d) const {
    double a = std::numeric_limits<double>::infinity();
    for_each_cone([&](Index o, Index n) { a = std::min(a, soc::max_step(u.segment(o, n), d.segment(o, n))); });
    return a;
  }

  double min_eig(const VectorXd &u) const {
    double m = std::numeric_limits<double>::infinity();
    for_each_cone([&](Index o, Index n) { m = std::min(m, soc::min_eig(u.segment(o, n))); });
    return m;
  }

  void add_identity(VectorXd &u, double a) const {
    for_each_cone([&](Index o, Index) { u(o) += a; });
  }

  VectorXd jordan(const VectorXd &x, const VectorXd &y) const {
    VectorXd out(N_);
    for_each_cone([&](Index o, Index n) { out.segment(o, n) = soc::jordan_product(x.segment(o, n), y.segment(o, n)); });
    return out;
  }

  VectorXd jordan_solve(const VectorXd &lambda, const VectorXd &r) const {
    VectorXd out(N_);
    for_each_cone([&](Index o, Index n) { out.segment(o, n) = soc::jordan_solve(lambda.segment(o, n), r.segment(o, n)); });
    return out;
  }

  const SolverConfig &cfg_;
  Index G_, L2_, n0_, N_;
  MatrixXd Sx_;
  VectorXd c_, h_;
  soc::NtScaling w0_;
  std::vector<Matrix3d> Wg_, Wginv_, D_;
  MatrixXd Bx_;
  Eigen::LLT<MatrixXd> Hllt_;
};

SocpSolution ConicIpm::run() {
  SocpSolution sol;
  set_scaling_identity();
  if (!factor())
    throw SolverError("initial factorization failed");

  VectorXd z = solveH(mulGt(h_));
  VectorXd s = h_ - mulG(z);
  VectorXd y = -mulG(solveH(c_));
  const double ms = min_eig(s), my = min_eig(y);
  if (ms <= 1e-8 * std::max(1.0, s.norm()))
    add_identity(s, 1.0 - ms);
  if (my <= 1e-8 * std::max(1.0, y.norm()))
    add_identity(y, 1.0 - my);

  const double hnorm = std::max(1.0, h_.norm());
  const double cnorm = std::max(1.0, c_.norm());
  const double degree = static_cast<double>(1 + G_);
  VectorXd e = VectorXd::Zero(N_);
  add_identity(e, 1.0);

  double best_merit = std::numeric_limits<double>::infinity();
  VectorXd bz = z, by = y;
  double bpres = 0, bdres = 0, bgap = 0;
  sol.status = SocpStatus::MaxIterations;

  int it = 0;
  for (;; ++it) {
    const VectorXd rp = mulG(z) + s - h_;
    const VectorXd rd = mulGt(y) + c_;
    const double pcost = c_.dot(z);
    const double dcost = -h_.dot(y);
    const double gap = s.dot(y);
    double relgap = std::numeric_limits<double>::infinity();
    if (dcost > 0.0)
      relgap = gap / dcost;
    else if (pcost < 0.0)
      relgap = gap / -pcost;
    const double pres = rp.norm() / hnorm;
    const double dres = rd.norm() / cnorm;

    const double merit = std::max({pres, dres, std::min(gap, relgap)});
    if (merit < best_merit) {
      best_merit = merit;
      bz = z, by = y;
      bpres = pres, bdres = dres, bgap = gap;
    }
    if (pres <= cfg_.feastol && dres <= cfg_.feastol &&
        (gap <= cfg_.abstol || relgap <= cfg_.reltol)) {
      sol.status = SocpStatus::Optimal;
      bz = z, by = y;
      bpres = pres, bdres = dres, bgap = gap;
      break;
    }
    if (it >= cfg_.max_iterations)
      break;

    try {
      set_scaling(s, y);
    } catch (const std::domain_error &) {
      break;
    }
    if (!factor())
      break;

    const VectorXd lambda = mulW(y, false);
    const double mu = gap / degree;

    const Step aff = newton(-rd, -rp, -lambda);
    const double a_aff = std::min({1.0, max_step(s, aff.ds), max_step(y, aff.dy)});
    const double sigma = std::pow(1.0 - a_aff, 3);

    VectorXd rc = -jordan(lambda, lambda) - jordan(mulW(aff.ds, true), mulW(aff.dy, false));
    rc += sigma * mu * e;
    const Step st = newton(-(1.0 - sigma) * rd, -(1.0 - sigma) * rp, jordan_solve(lambda, rc));
    const double amax = std::min(max_step(s, st.ds), max_step(y, st.dy));
    const double a = std::min(1.0, 0.99 * amax);
    if (!(a > 0.0) || !st.dz.allFinite())
      break;
    z += a * st.dz;
    s += a * st.ds;
    y += a * st.dy;
  }

  sol.iterations = it;
  sol.w_hat = bz;
  sol.primal_infeasibility = bpres;
  sol.dual_infeasibility = bdres;
  sol.gap = bgap;
  sol.y_residual = by.head(n0_);
  sol.y_groups = by.tail(3 * G_);
  return sol;
}

} // namespace

double least_squares_residual(const LiftedProblem &lp) {
  const Index G = lp.groups();
  MatrixXd Sx(lp.rows(), 2 * G);
  for (Index g = 0; g < G; ++g) {
    Sx.col(2 * g) = lp.S_hat.col(3 * g + 1);
    Sx.col(2 * g + 1) = lp.S_hat.col(3 * g + 2);
  }
  MatrixXd A = MatrixXd::Zero(lp.rows(), lp.rows());
  A.selfadjointView<Eigen::Lower>().rankUpdate(Sx);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(A.selfadjointView<Eigen::Lower>());
  const VectorXd &ev = es.eigenvalues();
  const double tol = 1e-10 * std::max(ev.maxCoeff(), 1e-300);
  const VectorXd proj = es.eigenvectors().transpose() * lp.p_hat;
  double r2 = 0.0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) <= tol)
      r2 += proj(i) * proj(i);
  return std::sqrt(r2);
}

SocpSolution solve_socp(const LiftedProblem &lp, const SolverConfig &cfg) {
  cfg.validate();
  if (lp.S_hat.rows() != lp.p_hat.size() || lp.S_hat.cols() != lp.c_hat.size() ||
      lp.c_hat.size() % 3 != 0)
    throw std::invalid_argument("lifted problem dimensions are inconsistent");

  SocpSolution sol;
  const auto finish = [&](SocpSolution &s) {
    s.complex_weights = reconstruct_complex(s.w_hat);
    s.objective = lp.c_hat.dot(s.w_hat);
    s.residual = (lp.p_hat - lp.S_hat * s.w_hat).norm();
  };

  if (lp.alpha >= lp.p_hat.norm()) {
    sol.w_hat = Eigen::VectorXd::Zero(lp.c_hat.size());
    sol.status = SocpStatus::Optimal;
    sol.y_residual = Eigen::VectorXd::Zero(lp.rows() + 1);
    sol.y_groups = lp.c_hat;
    finish(sol);
    return sol;
  }
  if (lp.alpha < least_squares_residual(lp) - 1e-12) {
    sol.w_hat = Eigen::VectorXd::Zero(lp.c_hat.size());
    sol.status = SocpStatus::Infeasible;
    finish(sol);
    return sol;
  }

  ConicIpm ipm(lp, cfg);
  sol = ipm.run();
  finish(sol);
  return sol;
}

Eigen::VectorXd group_magnitudes(const Eigen::VectorXcd &coefficients) {
  return coefficients.cwiseAbs();
}

std::vector<int> active_group_indices(const Eigen::VectorXcd &coefficients, double zero_threshold) {
  std::vector<int> out;
  if (coefficients.size() == 0)
    return out;
  const Eigen::VectorXd mag = group_magnitudes(coefficients);
  const double mx = mag.maxCoeff();
  if (!(mx > 1e-12))
    return out;
  for (Index g = 0; g < mag.size(); ++g)
    if (mag(g) > zero_threshold * mx)
      out.push_back(static_cast<int>(g));
  return out;
}

std::vector<std::pair<int, Axis>> active_groups(const SocpSolution &sol, double zero_threshold) {
  std::vector<std::pair<int, Axis>> out;
  for (int g : active_group_indices(sol.complex_weights, zero_threshold))
    out.emplace_back(g / 3, static_cast<Axis>(g % 3));
  return out;
}

} // namespace sssta
