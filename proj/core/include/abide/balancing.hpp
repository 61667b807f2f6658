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
#ifndef ABIDE_BALANCING_HPP_
#define ABIDE_BALANCING_HPP_

#include <Eigen/Dense>
#include <optional>

#include "abide/errors.hpp"

namespace abide {

// Nonnegative reweighting of a source index set. Normalized weights sum to 1
// within 1e-10.
struct WeightVector {
  Eigen::VectorXd weights;
  bool normalized = true;
};

struct BalanceDiagnostics {
  double max_abs_moment_gap = 0.0;
  double effective_sample_size = 0.0;  // (sum w)^2 / sum w^2
  int iterations = 0;
};

double effective_sample_size(const Eigen::VectorXd& weights);

double weighted_mean(const Eigen::VectorXd& values, const WeightVector& w);

enum class IpwMode {
  kMeanRecovery,  // w_i proportional to 1 / pi_i
  kAttOdds,       // w_i proportional to e_i / (1 - e_i)
};

// Inverse-propensity weights. Propensities must lie strictly inside (0, 1);
// they are clipped into [clip, 1-clip] before inversion and the result is
// normalized.
WeightVector ipw_weights(const Eigen::VectorXd& propensities, IpwMode mode,
                         double clip = 0.01);

struct EntropyBalanceResult {
  WeightVector weights;
  BalanceDiagnostics diagnostics;
  Eigen::VectorXd multipliers;  // dual solution, one per moment
};

// Minimum-KL-from-base weights satisfying sum_i w_i x_i = target_moments and
// sum_i w_i = 1, solved by Newton's method on the dual with a halving line
// search (w_i proportional to base_i * exp(lambda . x_i)). Succeeds with a
// moment gap <= 1e-8 or throws Infeasible / SingularHessian.
EntropyBalanceResult entropy_balance(
    const Eigen::MatrixXd& source_covariates,
    const Eigen::VectorXd& target_moments,
    const std::optional<Eigen::VectorXd>& base_weights = {});

struct AdversarialBalanceConfig {
  double learning_rate = 0.5;
  int max_rounds = 50;
  // Stop once the discriminator's balanced accuracy drops to 0.5 + this.
  double accuracy_tolerance = 0.02;
};

struct AdversarialBalanceResult {
  WeightVector weights;
  BalanceDiagnostics diagnostics;
  double balanced_accuracy = 0.5;
};

// Iterative reweighting game: each round fits a logistic discriminator
// between (uniformly weighted) target rows and (currently weighted) source
// rows, then tilts source weights by exp(eta * p_i) where p_i is the
// predicted target probability. Deterministic; no subsampling.
AdversarialBalanceResult adversarial_balance(
    const Eigen::MatrixXd& source_covariates,
    const Eigen::MatrixXd& target_covariates,
    const AdversarialBalanceConfig& config = {});

}  // namespace abide

#endif  // ABIDE_BALANCING_HPP_
