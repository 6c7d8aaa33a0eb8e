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

#include "sssta/bayesian_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>

#include "sssta/errors.hpp"

namespace sssta {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> finite_indices(const VectorXd &a) {
  std::vector<int> idx;
  for (Index i = 0; i < a.size(); ++i)
    if (std::isfinite(a(i)))
      idx.push_back(static_cast<int>(i));
  return idx;
}

MatrixXd take_cols(const MatrixXd &X, const std::vector<int> &idx) {
  MatrixXd out(X.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    out.col(static_cast<Index>(k)) = X.col(idx[k]);
  return out;
}

MatrixXd take_rows(const MatrixXd &X, const std::vector<int> &idx) {
  MatrixXd out(static_cast<Index>(idx.size()), X.cols());
  for (std::size_t k = 0; k < idx.size(); ++k)
    out.row(static_cast<Index>(k)) = X.row(idx[k]);
  return out;
}

MatrixXd take_block(const MatrixXd &X, const std::vector<int> &idx) {
  const Index n = static_cast<Index>(idx.size());
  MatrixXd out(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c)
      out(r, c) = X(idx[r], idx[c]);
  return out;
}

double default_noise(double alpha, Index rows) {
  const double s = alpha / std::sqrt(static_cast<double>(std::max<Index>(rows, 1)));
  return s > 0.0 ? s * s : 1e-8;
}

// Posterior pieces shared by the fast sequential loops. With precision
// Sigma^-1 = diag(a_act) + beta * Phi_act' Phi_act, holds for every basis
// i the quantities S_i = beta phi_i' phi_i - beta^2 z_i' Sigma z_i and the
// matching Q_i per task, plus the quadratic forms of the tasks.
struct ActiveStats {
  std::vector<int> act;
  MatrixXd sigma;
  double logdet_precision = 0.0;
  VectorXd S;
  MatrixXd Q;
  VectorXd tCt; // beta t't - beta^2 (Phi't)' Sigma (Phi't)

  void compute(const MatrixXd &PtP, const MatrixXd &PtT, const VectorXd &tt, const VectorXd &a,
               double beta) {
    act = finite_indices(a);
    const Index K = PtP.rows(), na = static_cast<Index>(act.size());
    S = beta * PtP.diagonal();
    Q = beta * PtT;
    tCt = beta * tt;
    logdet_precision = 0.0;
    sigma.resize(na, na);
    if (na == 0)
      return;
    MatrixXd prec = beta * take_block(PtP, act);
    for (Index k = 0; k < na; ++k)
      prec(k, k) += a(act[k]);
    Eigen::LLT<MatrixXd> llt(prec);
    if (llt.info() != Eigen::Success)
      throw SolverError("posterior precision is not positive definite");
    logdet_precision = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    sigma = llt.solve(MatrixXd::Identity(na, na));

    const MatrixXd Z = take_cols(PtP, act);        // K x na
    const MatrixXd ZS = Z * sigma;                 // K x na
    const MatrixXd Ta = take_rows(PtT, act);       // na x F
    const double b2 = beta * beta;
    for (Index i = 0; i < K; ++i)
      S(i) -= b2 * ZS.row(i).dot(Z.row(i));
    Q.noalias() -= b2 * ZS * Ta;
    for (Index f = 0; f < PtT.cols(); ++f)
      tCt(f) -= b2 * Ta.col(f).dot(sigma * Ta.col(f));
  }
};

// Multi-task marginal contribution of one basis as a function of its hyperparameter.
struct MtBasis {
  double s;
  double q[2];
  double g[2];
  double c;

  double ell(double alpha) const {
    if (!std::isfinite(alpha))
      return -0.5 * c * (std::log(g[0]) + std::log(g[1]));
    double v = 2.0 * std::log1p(s / alpha);
    for (int f = 0; f < 2; ++f)
      v += c * std::log(g[f] - q[f] * q[f] / (alpha + s));
    return -0.5 * v;
  }

  // Best hyperparameter among the stationary points and infinity.
  double optimum() const {
    const double A1 = q[0] * q[0], A2 = q[1] * q[1];
    const double P = A1 * g[1] + A2 * g[0], R = A1 * A2;
    const double a2 = 2.0 * s * g[0] * g[1] - c * P;
    const double a1 = -2.0 * s * P + 2.0 * c * R + c * s * P;
    const double a0 = 2.0 * s * R - 2.0 * c * s * R;
    double roots[2];
    int nr = 0;
    const double scale = std::abs(a2) + std::abs(a1) + std::abs(a0);
    if (scale == 0.0)
      return kInf;
    if (std::abs(a2) <= 1e-14 * scale) {
      if (a1 != 0.0)
        roots[nr++] = -a0 / a1;
    } else {
      const double disc = a1 * a1 - 4.0 * a2 * a0;
      if (disc >= 0.0) {
        const double qq = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
        if (qq != 0.0) {
          roots[nr++] = qq / a2;
          roots[nr++] = a0 / qq;
        } else {
          roots[nr++] = 0.0;
        }
      }
    }
    double best = kInf, best_val = ell(kInf);
    for (int k = 0; k < nr; ++k) {
      const double alpha = roots[k] - s;
      if (!(alpha > 0.0) || !std::isfinite(alpha))
        continue;
      const double v = ell(alpha);
      if (v > best_val) {
        best_val = v;
        best = alpha;
      }
    }
    return best;
  }
};

// Single-task marginal contribution of one basis.
struct StBasis {
  double s, q;

  double ell(double alpha) const {
    if (!std::isfinite(alpha))
      return 0.0;
    return 0.5 * (std::log(alpha) - std::log(alpha + s) + q * q / (alpha + s));
  }

  double optimum() const {
    const double theta = q * q - s;
    return theta > 0.0 ? s * s / theta : kInf;
  }
};

} // namespace

void MtBcsConfig::validate() const {
  if (!(beta1 > 0.0 && beta2 > 0.0))
    throw ConfigError("beta parameters must be positive");
  if (noise_variance && !(*noise_variance > 0.0))
    throw ConfigError("noise_variance must be positive");
  if (max_iterations < 1 || !(hyper_tol > 0.0) || !(prune_threshold > 0.0))
    throw ConfigError("BCS iteration limits must be positive");
}

void StBcsConfig::validate() const {
  if (noise_variance && !(*noise_variance > 0.0))
    throw ConfigError("noise_variance must be positive");
  if (max_iterations < 1 || !(hyper_tol > 0.0) || !(prune_threshold > 0.0))
    throw ConfigError("BCS iteration limits must be positive");
}

MatrixXd stack_real(const Eigen::MatrixXcd &S) {
  MatrixXd out(2 * S.rows(), S.cols());
  out << S.real(), S.imag();
  return out;
}

MatrixXd mt_tasks(const Eigen::VectorXcd &reference) {
  const Index L = reference.size();
  MatrixXd T = MatrixXd::Zero(2 * L, 2);
  T.col(0).head(L) = reference.real();
  T.col(1).head(L) = reference.imag();
  return T;
}

Posterior gaussian_posterior(const MatrixXd &S, const MatrixXd &P, const VectorXd &a,
                             double sigma2) {
  if (S.cols() != a.size() || S.rows() != P.rows())
    throw std::invalid_argument("posterior dimensions do not match");
  Posterior post;
  post.active = finite_indices(a);
  const Index na = static_cast<Index>(post.active.size());
  post.mean = MatrixXd::Zero(a.size(), P.cols());
  post.covariance.resize(na, na);
  if (na == 0)
    return post;
  const MatrixXd Sa = take_cols(S, post.active);
  MatrixXd prec = Sa.transpose() * Sa / sigma2;
  for (Index k = 0; k < na; ++k)
    prec(k, k) += a(post.active[k]);
  Eigen::LLT<MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success)
    throw SolverError("posterior precision is singular; reciprocal condition estimate " +
                      std::to_string(llt.rcond()));
  post.covariance = llt.solve(MatrixXd::Identity(na, na));
  const MatrixXd m = post.covariance * (Sa.transpose() * P) / sigma2;
  for (Index k = 0; k < na; ++k)
    post.mean.row(post.active[k]) = m.row(k);
  return post;
}

Posterior mt_posterior(const MatrixXd &S_breve, const MatrixXd &P, const VectorXd &a) {
  return gaussian_posterior(S_breve, P, a, 1.0);
}

double mt_evidence(const VectorXd &a, const MatrixXd &S_breve, const VectorXd &p_R,
                   const VectorXd &p_I, const MtBcsConfig &cfg) {
  if ((a.array() <= 0.0).any())
    return std::numeric_limits<double>::quiet_NaN();
  const Index N = S_breve.rows(), K = S_breve.cols();
  const double c =
      static_cast<double>(cfg.exponent == EvidenceExponent::Groups ? K : N) + 2.0 * cfg.beta1;
  const std::vector<int> act = finite_indices(a);
  const MatrixXd Sa = take_cols(S_breve, act);
  MatrixXd C = MatrixXd::Identity(N, N);
  for (std::size_t k = 0; k < act.size(); ++k)
    C += Sa.col(static_cast<Index>(k)) * Sa.col(static_cast<Index>(k)).transpose() / a(act[k]);
  Eigen::LLT<MatrixXd> llt(C);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  double L = 0.0;
  for (const VectorXd *t : {&p_R, &p_I}) {
    const double quad = cfg.form == EvidenceForm::Standard ? t->dot(llt.solve(*t)) : t->dot(C * *t);
    L += logdet + c * std::log(quad + 2.0 * cfg.beta2);
  }
  return -0.5 * L;
}

VectorXd mt_evidence_gradient(const VectorXd &a, const MatrixXd &S_breve, const VectorXd &p_R,
                              const VectorXd &p_I, const MtBcsConfig &cfg) {
  const Index N = S_breve.rows(), K = S_breve.cols();
  const double c =
      static_cast<double>(cfg.exponent == EvidenceExponent::Groups ? K : N) + 2.0 * cfg.beta1;
  MatrixXd C = MatrixXd::Identity(N, N);
  for (Index i = 0; i < K; ++i)
    if (std::isfinite(a(i)))
      C += S_breve.col(i) * S_breve.col(i).transpose() / a(i);
  Eigen::LLT<MatrixXd> llt(C);
  const MatrixXd CiS = llt.solve(S_breve);
  VectorXd grad = VectorXd::Zero(K);
  for (const VectorXd *t : {&p_R, &p_I}) {
    const VectorXd Cit = llt.solve(*t);
    const double quad = cfg.form == EvidenceForm::Standard ? t->dot(Cit) : t->dot(C * *t);
    const double denom = quad + 2.0 * cfg.beta2;
    for (Index i = 0; i < K; ++i) {
      if (!std::isfinite(a(i)))
        continue;
      const double ai2 = a(i) * a(i);
      const double dlogdet = -S_breve.col(i).dot(CiS.col(i)) / ai2;
      const double proj = cfg.form == EvidenceForm::Standard ? S_breve.col(i).dot(Cit)
                                                             : S_breve.col(i).dot(*t);
      const double dquad = cfg.form == EvidenceForm::Standard ? proj * proj / ai2 : -proj * proj / ai2;
      grad(i) += -0.5 * (dlogdet + c * dquad / denom);
    }
  }
  return grad;
}

BcsResult mt_maximize(const Eigen::MatrixXcd &steering, const Eigen::VectorXcd &reference,
                      double alpha, const MtBcsConfig &cfg) {
  cfg.validate();
  const MatrixXd Phi = stack_real(steering);
  const MatrixXd T = mt_tasks(reference);
  const Index N = Phi.rows(), K = Phi.cols();
  const double c =
      static_cast<double>(cfg.exponent == EvidenceExponent::Groups ? K : N) + 2.0 * cfg.beta1;

  BcsResult res;
  EvidenceState &st = res.state;
  st.noise_variance = cfg.noise_variance ? *cfg.noise_variance : default_noise(alpha, N);
  st.a = VectorXd::Constant(K, kInf);
  st.mean_R = VectorXd::Zero(K);
  st.mean_I = VectorXd::Zero(K);
  res.weights = Eigen::VectorXcd::Zero(K);

  const MatrixXd PtP = Phi.transpose() * Phi;
  const MatrixXd PtT = Phi.transpose() * T;
  const VectorXd tt = T.colwise().squaredNorm().transpose();
  if (tt.sum() == 0.0) {
    st.converged = true;
    return res;
  }

  // Seed with the basis best aligned to the tasks.
  Index i0 = -1;
  double best = 0.0;
  for (Index i = 0; i < K; ++i) {
    if (!(PtP(i, i) > 0.0))
      continue;
    const double score = PtT.row(i).squaredNorm() / PtP(i, i);
    if (score > best) {
      best = score;
      i0 = i;
    }
  }
  if (i0 < 0) {
    st.converged = true;
    return res;
  }
  {
    const double nrm = PtP(i0, i0);
    const double denom = PtT.row(i0).squaredNorm() / (2.0 * nrm) - st.noise_variance;
    st.a(i0) = denom > 0.0 ? nrm / denom : nrm / PtT.row(i0).squaredNorm();
  }

  ActiveStats as;
  double L = 0.0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    as.compute(PtP, PtT, tt, st.a, 1.0);
    double sum_log_a = 0.0;
    for (int k : as.act)
      sum_log_a += std::log(st.a(k));
    const double logdetC = as.logdet_precision - sum_log_a;
    const double G0 = as.tCt(0) + 2.0 * cfg.beta2, G1 = as.tCt(1) + 2.0 * cfg.beta2;
    L = -0.5 * (2.0 * logdetC + c * (std::log(G0) + std::log(G1)));

    Index pick = -1;
    double pick_gain = 0.0, pick_alpha = kInf;
    for (Index i = 0; i < K; ++i) {
      if (!(PtP(i, i) > 0.0))
        continue;
      const double ai = st.a(i);
      MtBasis b{};
      b.c = c;
      if (std::isfinite(ai)) {
        const double d = ai - as.S(i);
        b.s = ai * as.S(i) / d;
        for (int f = 0; f < 2; ++f) {
          b.q[f] = ai * as.Q(i, f) / d;
          b.g[f] = (f == 0 ? G0 : G1) + as.Q(i, f) * as.Q(i, f) / d;
        }
      } else {
        b.s = as.S(i);
        for (int f = 0; f < 2; ++f) {
          b.q[f] = as.Q(i, f);
          b.g[f] = f == 0 ? G0 : G1;
        }
      }
      if (!(b.s > 0.0))
        continue;
      double target = b.optimum();
      if (target > cfg.prune_threshold)
        target = kInf;
      if (!std::isfinite(target) && !std::isfinite(ai))
        continue;
      const double gain = b.ell(target) - b.ell(ai);
      if (gain > pick_gain) {
        pick_gain = gain;
        pick = i;
        pick_alpha = target;
      }
    }
    if (pick < 0 || pick_gain <= cfg.hyper_tol * std::max(1.0, std::abs(L))) {
      st.converged = true;
      break;
    }
    st.a(pick) = pick_alpha;
  }
  st.iterations = it;

  const Posterior post = mt_posterior(Phi, T, st.a);
  st.active_set = post.active;
  st.covariance = post.covariance;
  st.mean_R = post.mean.col(0);
  st.mean_I = post.mean.col(1);
  st.evidence = L;
  res.weights.real() = st.mean_R;
  res.weights.imag() = st.mean_I;
  return res;
}

BcsResult mt_maximize(const SampledProblem &problem, double alpha, const MtBcsConfig &cfg) {
  return mt_maximize(problem.steering, problem.reference, alpha, cfg);
}

MatrixXd st_lift(const Eigen::MatrixXcd &S) {
  const Index L = S.rows(), M = S.cols() / 3;
  MatrixXd out(2 * L, 6 * M);
  for (Index m = 0; m < M; ++m) {
    for (Index f = 0; f < 3; ++f) {
      const auto col = S.col(3 * m + f);
      const Index re = (2 * f) * M + m, im = (2 * f + 1) * M + m;
      out.col(re) << col.real(), col.imag();
      out.col(im) << -col.imag(), col.real();
    }
  }
  return out;
}

Eigen::VectorXcd st_reassemble(const VectorXd &w_tilde, int M) {
  Eigen::VectorXcd v(3 * M);
  for (int m = 0; m < M; ++m)
    for (int f = 0; f < 3; ++f)
      v(3 * m + f) = cd(w_tilde((2 * f) * M + m), w_tilde((2 * f + 1) * M + m));
  return v;
}

Posterior st_posterior(const MatrixXd &S_tilde, const VectorXd &p_hat, const VectorXd &a,
                       double sigma2) {
  return gaussian_posterior(S_tilde, p_hat, a, sigma2);
}

double st_likelihood(const VectorXd &a, double sigma2, const MatrixXd &S_tilde,
                     const VectorXd &p_hat) {
  const Index N = S_tilde.rows();
  MatrixXd C = sigma2 * MatrixXd::Identity(N, N);
  for (Index i = 0; i < a.size(); ++i)
    if (std::isfinite(a(i)))
      C += S_tilde.col(i) * S_tilde.col(i).transpose() / a(i);
  Eigen::LLT<MatrixXd> llt(C);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * (N * std::log(2.0 * std::numbers::pi) + logdet + p_hat.dot(llt.solve(p_hat)));
}

StBcsResult st_maximize(const Eigen::MatrixXcd &steering, const Eigen::VectorXcd &reference,
                        double alpha, const StBcsConfig &cfg) {
  cfg.validate();
  const Index M = steering.cols() / 3;
  const MatrixXd Phi = st_lift(steering);
  const VectorXd t = split_complex(reference);
  const Index N = Phi.rows(), K = Phi.cols();

  StBcsResult res;
  StBcsState &st = res.state;
  st.sigma2 = cfg.noise_variance ? *cfg.noise_variance : default_noise(alpha, N);
  st.a_tilde = VectorXd::Constant(K, kInf);
  st.mean = VectorXd::Zero(K);
  res.weights = Eigen::VectorXcd::Zero(3 * M);

  const MatrixXd PtP = Phi.transpose() * Phi;
  const MatrixXd PtT = Phi.transpose() * t;
  const VectorXd tt = VectorXd::Constant(1, t.squaredNorm());
  if (tt(0) == 0.0) {
    st.converged = true;
    return res;
  }

  Index i0 = -1;
  double best = 0.0;
  for (Index i = 0; i < K; ++i) {
    if (!(PtP(i, i) > 0.0))
      continue;
    const double score = PtT(i, 0) * PtT(i, 0) / PtP(i, i);
    if (score > best) {
      best = score;
      i0 = i;
    }
  }
  if (i0 < 0) {
    st.converged = true;
    return res;
  }
  {
    const double nrm = PtP(i0, i0);
    const double denom = PtT(i0, 0) * PtT(i0, 0) / nrm - st.sigma2;
    st.a_tilde(i0) = denom > 0.0 ? nrm / denom : nrm / (PtT(i0, 0) * PtT(i0, 0) / nrm);
  }

  ActiveStats as;
  double L = 0.0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const double beta = 1.0 / st.sigma2;
    as.compute(PtP, PtT, tt, st.a_tilde, beta);
    double sum_log_a = 0.0;
    for (int k : as.act)
      sum_log_a += std::log(st.a_tilde(k));
    L = -0.5 * (N * std::log(2.0 * std::numbers::pi) + N * std::log(st.sigma2) +
                as.logdet_precision - sum_log_a + as.tCt(0));

    Index pick = -1;
    double pick_gain = 0.0, pick_alpha = kInf;
    for (Index i = 0; i < K; ++i) {
      if (!(PtP(i, i) > 0.0))
        continue;
      const double ai = st.a_tilde(i);
      StBasis b{};
      if (std::isfinite(ai)) {
        const double d = ai - as.S(i);
        b.s = ai * as.S(i) / d;
        b.q = ai * as.Q(i, 0) / d;
      } else {
        b.s = as.S(i);
        b.q = as.Q(i, 0);
      }
      if (!(b.s > 0.0))
        continue;
      double target = b.optimum();
      if (target > cfg.prune_threshold)
        target = kInf;
      if (!std::isfinite(target) && !std::isfinite(ai))
        continue;
      const double gain = b.ell(target) - b.ell(ai);
      if (gain > pick_gain) {
        pick_gain = gain;
        pick = i;
        pick_alpha = target;
      }
    }
    const bool settled = pick < 0 || pick_gain <= cfg.hyper_tol * std::max(1.0, std::abs(L));
    if (settled && !cfg.learn_noise) {
      st.converged = true;
      break;
    }
    if (pick >= 0 && !settled)
      st.a_tilde(pick) = pick_alpha;
    if (cfg.learn_noise) {
      const Posterior post = st_posterior(Phi, t, st.a_tilde, st.sigma2);
      double gamma_sum = 0.0;
      for (std::size_t k = 0; k < post.active.size(); ++k)
        gamma_sum += 1.0 - st.a_tilde(post.active[k]) *
                               post.covariance(static_cast<Index>(k), static_cast<Index>(k));
      const double resid = (t - Phi * post.mean.col(0)).squaredNorm();
      const double next = resid / std::max(static_cast<double>(N) - gamma_sum, 1.0);
      const bool noise_settled = std::abs(next - st.sigma2) <= 1e-6 * st.sigma2;
      st.sigma2 = std::max(next, 1e-12);
      if (settled && noise_settled) {
        st.converged = true;
        break;
      }
    }
  }
  st.iterations = it;

  const Posterior post = st_posterior(Phi, t, st.a_tilde, st.sigma2);
  st.active_set = post.active;
  st.covariance = post.covariance;
  st.mean = post.mean.col(0);
  st.likelihood = L;
  res.weights = st_reassemble(st.mean, static_cast<int>(M));
  return res;
}

StBcsResult st_maximize(const SampledProblem &problem, double alpha, const StBcsConfig &cfg) {
  return st_maximize(problem.steering, problem.reference, alpha, cfg);
}

} // namespace sssta
