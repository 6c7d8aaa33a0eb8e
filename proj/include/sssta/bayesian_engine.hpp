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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sssta/problem_builder.hpp"

namespace sssta {

// Count used in the exponent of the quadratic-form log term.
enum class EvidenceExponent { Groups, Samples };
// Standard uses the inverse of I + S A^-1 S'; Printed drops the inverse.
enum class EvidenceForm { Standard, Printed };

struct MtBcsConfig {
  double beta1 = 1e3;
  double beta2 = 0.125;
  // Initial noise variance; defaults to (alpha / sqrt(2L))^2 when unset.
  std::optional<double> noise_variance;
  int max_iterations = 2000;
  double hyper_tol = 1e-8;
  double prune_threshold = 1e12;
  EvidenceExponent exponent = EvidenceExponent::Samples;
  EvidenceForm form = EvidenceForm::Standard;

  void validate() const;
};

struct StBcsConfig {
  std::optional<double> noise_variance;
  bool learn_noise = false;
  int max_iterations = 2000;
  double hyper_tol = 1e-8;
  double prune_threshold = 1e12;

  void validate() const;
};

struct Posterior {
  std::vector<int> active;       // indices with finite hyperparameter
  Eigen::MatrixXd covariance;    // on the active set
  Eigen::MatrixXd mean;          // full length, one column per task
};

/// Hyperparameter state after evidence maximization. Pruned entries hold +inf.
struct EvidenceState {
  Eigen::VectorXd a;
  Eigen::VectorXd mean_R, mean_I;
  Eigen::MatrixXd covariance;
  std::vector<int> active_set;
  double evidence = 0.0;
  double noise_variance = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct StBcsState {
  Eigen::VectorXd a_tilde;
  double sigma2 = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::vector<int> active_set;
  double likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct BcsResult {
  Eigen::VectorXcd weights; // effective coefficients, p = S * v
  EvidenceState state;
};

struct StBcsResult {
  Eigen::VectorXcd weights;
  StBcsState state;
};

// Stacked real matrix [Re S; Im S].
Eigen::MatrixXd stack_real(const Eigen::MatrixXcd &S);

// Real/imaginary measurement tasks: columns [Re p; 0] and [Im p; 0].
Eigen::MatrixXd mt_tasks(const Eigen::VectorXcd &reference);

// Sigma = (A + S'S/sigma2)^-1, mean = Sigma S' P / sigma2 on entries with finite a.
Posterior gaussian_posterior(const Eigen::MatrixXd &S, const Eigen::MatrixXd &P,
                             const Eigen::VectorXd &a, double sigma2 = 1.0);

Posterior mt_posterior(const Eigen::MatrixXd &S_breve, const Eigen::MatrixXd &P,
                       const Eigen::VectorXd &a);

double mt_evidence(const Eigen::VectorXd &a, const Eigen::MatrixXd &S_breve,
                   const Eigen::VectorXd &p_R, const Eigen::VectorXd &p_I,
                   const MtBcsConfig &cfg);

Eigen::VectorXd mt_evidence_gradient(const Eigen::VectorXd &a, const Eigen::MatrixXd &S_breve,
                                     const Eigen::VectorXd &p_R, const Eigen::VectorXd &p_I,
                                     const MtBcsConfig &cfg);

BcsResult mt_maximize(const Eigen::MatrixXcd &steering, const Eigen::VectorXcd &reference,
                      double alpha, const MtBcsConfig &cfg);

BcsResult mt_maximize(const SampledProblem &problem, double alpha, const MtBcsConfig &cfg);

// Lifted matrix [Re S, -Im S; Im S, Re S] with columns in block order (2f + part) * M + m.
Eigen::MatrixXd st_lift(const Eigen::MatrixXcd &S);
Eigen::VectorXcd st_reassemble(const Eigen::VectorXd &w_tilde, int M);

Posterior st_posterior(const Eigen::MatrixXd &S_tilde, const Eigen::VectorXd &p_hat,
                       const Eigen::VectorXd &a, double sigma2);

double st_likelihood(const Eigen::VectorXd &a, double sigma2, const Eigen::MatrixXd &S_tilde,
                     const Eigen::VectorXd &p_hat);

StBcsResult st_maximize(const Eigen::MatrixXcd &steering, const Eigen::VectorXcd &reference,
                        double alpha, const StBcsConfig &cfg);

StBcsResult st_maximize(const SampledProblem &problem, double alpha, const StBcsConfig &cfg);

} // namespace sssta
