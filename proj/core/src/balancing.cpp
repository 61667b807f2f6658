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
#include "abide/balancing.hpp"

#include <cmath>

#include "abide/glm.hpp"

namespace abide {

namespace {

constexpr double kMomentGapTolerance = 1e-8;
constexpr int kNewtonIterationCap = 200;
constexpr int kNewtonMaxHalvings = 40;

}  // namespace

double effective_sample_size(const Eigen::VectorXd& weights) {
  const double sum = weights.sum();
  const double sum_squares = weights.squaredNorm();
  return sum_squares > 0.0 ? sum * sum / sum_squares : 0.0;
}

double weighted_mean(const Eigen::VectorXd& values, const WeightVector& w) {
  const double total = w.weights.sum();
  if (total <= 0.0) {
    throw Error(ErrorCode::kDegenerateWeights, "weights sum to zero");
  }
  return values.dot(w.weights) / total;
}

WeightVector ipw_weights(const Eigen::VectorXd& propensities, IpwMode mode,
                         double clip) {
  if (propensities.size() == 0) {
    throw Error(ErrorCode::kEmptyVector, "no propensities supplied");
  }
  if (!(clip > 0.0 && clip < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "clip must lie in (0, 0.5)");
  }
  for (Eigen::Index i = 0; i < propensities.size(); ++i) {
    if (!(propensities[i] > 0.0 && propensities[i] < 1.0)) {
      throw Error(ErrorCode::kOutOfRangePropensity,
                  "propensity " + std::to_string(propensities[i]) +
                      " at index " + std::to_string(i) +
                      " is outside (0, 1)");
    }
  }
  const Eigen::ArrayXd clipped =
      propensities.array().max(clip).min(1.0 - clip);
  Eigen::VectorXd weights = mode == IpwMode::kMeanRecovery
                                ? Eigen::VectorXd(clipped.inverse())
                                : Eigen::VectorXd(clipped / (1.0 - clipped));
  weights /= weights.sum();
  return WeightVector{std::move(weights), true};
}

EntropyBalanceResult entropy_balance(
    const Eigen::MatrixXd& source_covariates,
    const Eigen::VectorXd& target_moments,
    const std::optional<Eigen::VectorXd>& base_weights) {
  const Eigen::Index n = source_covariates.rows();
  const Eigen::Index dim = source_covariates.cols();
  if (n == 0) {
    throw Error(ErrorCode::kEmptyVector, "no source rows");
  }
  if (target_moments.size() != dim) {
    throw Error(ErrorCode::kArityMismatch,
                "target moment arity does not match covariate arity");
  }
  Eigen::VectorXd base = base_weights.value_or(Eigen::VectorXd::Ones(n));
  if (base.size() != n || (base.array() < 0.0).any() || base.sum() <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "base weights must be nonnegative with positive sum");
  }
  base /= base.sum();

  // Dual objective: f(lambda) = log sum_i base_i exp(lambda . (x_i - m)).
  // Its gradient is the moment gap under the tilted weights and its Hessian
  // the weighted covariance, so Newton drives the gap to zero whenever the
  // target lies inside the convex hull of the source rows.
  const Eigen::MatrixXd centered =
      source_covariates.rowwise() - target_moments.transpose();

  Eigen::VectorXd multipliers = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd weights = base;

  const auto objective = [&](const Eigen::VectorXd& lambda,
                             Eigen::VectorXd* tilted) {
    Eigen::ArrayXd exponent = (centered * lambda).array();
    const double shift = exponent.maxCoeff();
    Eigen::ArrayXd raw = base.array() * (exponent - shift).exp();
    const double total = raw.sum();
    if (tilted != nullptr) *tilted = (raw / total).matrix();
    return std::log(total) + shift;
  };

  double value = objective(multipliers, &weights);
  BalanceDiagnostics diagnostics;

  for (int iteration = 1; iteration <= kNewtonIterationCap; ++iteration) {
    const Eigen::VectorXd gradient = centered.transpose() * weights;
    diagnostics.max_abs_moment_gap = gradient.cwiseAbs().maxCoeff();
    diagnostics.iterations = iteration - 1;
    if (diagnostics.max_abs_moment_gap <= kMomentGapTolerance) {
      diagnostics.effective_sample_size = effective_sample_size(weights);
      return EntropyBalanceResult{WeightVector{std::move(weights), true},
                                  diagnostics, std::move(multipliers)};
    }

    Eigen::MatrixXd hessian =
        centered.transpose() * weights.asDiagonal() * centered -
        gradient * gradient.transpose();
    const Eigen::LDLT<Eigen::MatrixXd> solver(hessian);
    Eigen::VectorXd step = solver.solve(-gradient);
    if (solver.info() != Eigen::Success || !step.allFinite()) {
      throw Error(ErrorCode::kSingularHessian,
                  "entropy balancing Hessian is singular");
    }

    double scale = 1.0;
    bool improved = false;
    for (int halving = 0; halving <= kNewtonMaxHalvings; ++halving) {
      const Eigen::VectorXd candidate = multipliers + scale * step;
      Eigen::VectorXd candidate_weights;
      const double candidate_value = objective(candidate, &candidate_weights);
      if (std::isfinite(candidate_value) && candidate_value <= value) {
        multipliers = candidate;
        weights = std::move(candidate_weights);
        value = candidate_value;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;  // stalled; gap check below decides
  }

  const Eigen::VectorXd gap = centered.transpose() * weights;
  if (gap.cwiseAbs().maxCoeff() > kMomentGapTolerance) {
    throw Error(ErrorCode::kInfeasible,
                "moment gap stalled at " +
                    std::to_string(gap.cwiseAbs().maxCoeff()) +
                    "; target moments appear outside the convex hull");
  }
  diagnostics.max_abs_moment_gap = gap.cwiseAbs().maxCoeff();
  diagnostics.effective_sample_size = effective_sample_size(weights);
  return EntropyBalanceResult{WeightVector{std::move(weights), true},
                              diagnostics, std::move(multipliers)};
}

AdversarialBalanceResult adversarial_balance(
    const Eigen::MatrixXd& source_covariates,
    const Eigen::MatrixXd& target_covariates,
    const AdversarialBalanceConfig& config) {
  const Eigen::Index n_source = source_covariates.rows();
  const Eigen::Index n_target = target_covariates.rows();
  if (n_source == 0 || n_target == 0) {
    throw Error(ErrorCode::kEmptyVector, "source and target must be nonempty");
  }
  if (source_covariates.cols() != target_covariates.cols()) {
    throw Error(ErrorCode::kArityMismatch,
                "source and target covariate arity differ");
  }

  const Eigen::Index dim = source_covariates.cols();
  Eigen::MatrixXd stacked(n_source + n_target, dim);
  stacked.topRows(n_source) = source_covariates;
  stacked.bottomRows(n_target) = target_covariates;
  Eigen::VectorXd labels(n_source + n_target);
  labels.head(n_source).setZero();
  labels.tail(n_target).setOnes();

  Eigen::VectorXd weights =
      Eigen::VectorXd::Constant(n_source, 1.0 / static_cast<double>(n_source));
  const Eigen::VectorXd target_weights = Eigen::VectorXd::Constant(
      n_target, 1.0 / static_cast<double>(n_target));

  AdversarialBalanceResult result;
  result.balanced_accuracy = 1.0;

  const Eigen::VectorXd target_mean =
      target_covariates.colwise().mean().transpose();

  for (int round = 1; round <= config.max_rounds; ++round) {
    Eigen::VectorXd fit_weights(n_source + n_target);
    fit_weights.head(n_source) = weights;
    fit_weights.tail(n_target) = target_weights;

    LogisticModel discriminator;
    try {
      discriminator = fit_logistic(stacked, labels, fit_weights);
    } catch (const Error& error) {
      if (error.code() != ErrorCode::kSeparation) {
        throw Error(ErrorCode::kDiscriminatorFailure, error.what());
      }
      // Quasi-separated rounds are expected when the weighted source has
      // collapsed near the target support; the documented ridge retry keeps
      // the game going.
      try {
        LogisticFitOptions ridged;
        ridged.ridge = 1e-6;
        discriminator = fit_logistic(stacked, labels, fit_weights, ridged);
      } catch (const Error& retry_error) {
        throw Error(ErrorCode::kDiscriminatorFailure, retry_error.what());
      }
    }

    const Eigen::VectorXd probabilities = predict_proba(discriminator, stacked);

    // Weighted balanced accuracy at the 0.5 threshold.
    double true_negative = 0.0;
    for (Eigen::Index i = 0; i < n_source; ++i) {
      if (probabilities[i] <= 0.5) true_negative += weights[i];
    }
    double true_positive = 0.0;
    for (Eigen::Index i = 0; i < n_target; ++i) {
      if (probabilities[n_source + i] > 0.5) {
        true_positive += target_weights[i];
      }
    }
    result.balanced_accuracy = 0.5 * (true_negative + true_positive);
    result.diagnostics.iterations = round - 1;
    if (result.balanced_accuracy <= 0.5 + config.accuracy_tolerance) break;

    weights.array() *=
        (config.learning_rate * probabilities.head(n_source).array()).exp();
    weights /= weights.sum();
    result.diagnostics.iterations = round;
  }

  result.diagnostics.effective_sample_size = effective_sample_size(weights);
  if (n_source > 2 && result.diagnostics.effective_sample_size < 2.0) {
    throw Error(ErrorCode::kDegenerateWeights,
                "effective sample size " +
                    std::to_string(result.diagnostics.effective_sample_size) +
                    " after balancing");
  }
  const Eigen::VectorXd weighted_source_mean =
      source_covariates.transpose() * weights;
  result.diagnostics.max_abs_moment_gap =
      (weighted_source_mean - target_mean).cwiseAbs().maxCoeff();
  result.weights = WeightVector{std::move(weights), true};
  return result;
}

}  // namespace abide
