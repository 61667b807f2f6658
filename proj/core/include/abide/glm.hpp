/*
 * Copyright 2026 The Abide Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef ABIDE_GLM_HPP_
#define ABIDE_GLM_HPP_

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "abide/errors.hpp"

namespace abide {

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                  : std::exp(x) / (1.0 + std::exp(x));
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Weighted logistic regression fitted by iteratively reweighted least
// squares with step halving. Coefficients are stored intercept-first.
struct LogisticModel {
  Eigen::VectorXd coefficients;
  bool converged = false;
  int iterations = 0;
  double final_deviance = 0.0;
  // Penalized log-likelihood after each accepted step, starting from the
  // zero coefficient vector. Non-decreasing by construction.
  std::vector<double> log_likelihood_trace;
};

struct LinearModel {
  Eigen::VectorXd coefficients;
};

struct LogisticFitOptions {
  // L2 penalty applied to the non-intercept coefficients. A small ridge
  // (1e-6) is the documented retry for Separation failures.
  double ridge = 0.0;
  int max_iterations = 100;
  double tolerance = 1e-8;  // max-abs coefficient step
  // Quasi-complete separation guard: a coefficient norm beyond this cap
  // while the deviance is still improving raises Separation. Ignored when
  // ridge > 0, which makes the optimum finite.
  double coefficient_norm_cap = 30.0;
};

// Maximizes the (weighted) Bernoulli log-likelihood with a logit link.
// `features` carries one row per observation and no intercept column; the
// intercept is prepended internally. Labels must contain at least one 0 and
// one 1 with positive weight. Throws Separation or SingularSystem; an
// iteration-cap exit returns the model with converged=false.
LogisticModel fit_logistic(
    const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
    const std::optional<Eigen::VectorXd>& sample_weights = {},
    const LogisticFitOptions& options = {});

// Inverse-link predictions, each strictly inside (0, 1).
Eigen::VectorXd predict_proba(const LogisticModel& model,
                              const Eigen::MatrixXd& features);

// Ordinary least squares via column-pivoted QR. Throws RankDeficient when
// the intercept-augmented design loses rank.
LinearModel fit_ols(const Eigen::MatrixXd& features,
                    const Eigen::VectorXd& response);

Eigen::VectorXd predict_linear(const LinearModel& model,
                               const Eigen::MatrixXd& features);

}  // namespace abide

#endif  // ABIDE_GLM_HPP_
