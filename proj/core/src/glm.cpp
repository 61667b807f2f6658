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
#include "abide/glm.hpp"

#include <cmath>

namespace abide {

namespace {

constexpr double kProbabilityFloor = 1e-12;
constexpr int kMaxHalvings = 40;

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd design(features.rows(), features.cols() + 1);
  design.col(0).setOnes();
  if (features.cols() > 0) design.rightCols(features.cols()) = features;
  return design;
}

// Weighted Bernoulli log-likelihood, Sum w_i (y_i eta_i - softplus(eta_i)).
double bernoulli_log_likelihood(const Eigen::VectorXd& linear_predictor,
                                const Eigen::VectorXd& labels,
                                const Eigen::VectorXd& weights) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < linear_predictor.size(); ++i) {
    total += weights[i] * (labels[i] * linear_predictor[i] -
                           softplus(linear_predictor[i]));
  }
  return total;
}

}  // namespace

LogisticModel fit_logistic(const Eigen::MatrixXd& features,
                           const Eigen::VectorXd& labels,
                           const std::optional<Eigen::VectorXd>& sample_weights,
                           const LogisticFitOptions& options) {
  const Eigen::Index n = labels.size();
  if (features.rows() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature rows do not match label count");
  }
  Eigen::VectorXd weights =
      sample_weights.value_or(Eigen::VectorXd::Ones(n));
  if (weights.size() != n || (weights.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample weights must be nonnegative and match label count");
  }
  if (weights.sum() <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "sample weights sum to zero");
  }
  double mass_zero = 0.0, mass_one = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] == 0.0) {
      mass_zero += weights[i];
    } else if (labels[i] == 1.0) {
      mass_one += weights[i];
    } else {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
  }
  if (mass_zero <= 0.0 || mass_one <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "labels need both classes with positive weight");
  }

  const Eigen::MatrixXd design = with_intercept(features);
  const Eigen::Index dim = design.cols();

  // Ridge applies to slopes only; the intercept stays unpenalized.
  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(dim, options.ridge);
  penalty[0] = 0.0;

  LogisticModel model;
  model.coefficients = Eigen::VectorXd::Zero(dim);

  const auto penalized_ll = [&](const Eigen::VectorXd& beta,
                                const Eigen::VectorXd& eta) {
    return bernoulli_log_likelihood(eta, labels, weights) -
           0.5 * (penalty.array() * beta.array().square()).sum();
  };

  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  double current_ll = penalized_ll(model.coefficients, eta);
  model.log_likelihood_trace.push_back(current_ll);

  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    const Eigen::ArrayXd mu = eta.array()
                                  .unaryExpr([](double x) { return sigmoid(x); })
                                  .max(kProbabilityFloor)
                                  .min(1.0 - kProbabilityFloor);
    const Eigen::VectorXd residual =
        (weights.array() * (labels.array() - mu)).matrix();
    const Eigen::VectorXd gradient =
        design.transpose() * residual -
        (penalty.array() * model.coefficients.array()).matrix();
    const Eigen::ArrayXd irls_weight = weights.array() * mu * (1.0 - mu);
    Eigen::MatrixXd hessian =
        design.transpose() * irls_weight.matrix().asDiagonal() * design;
    hessian.diagonal() += penalty;

    const Eigen::LDLT<Eigen::MatrixXd> solver(hessian);
    Eigen::VectorXd step = solver.solve(gradient);
    if (solver.info() != Eigen::Success || !step.allFinite()) {
      throw Error(ErrorCode::kSingularSystem,
                  "IRLS normal equations are singular");
    }

    // Step halving keeps the penalized log-likelihood non-decreasing.
    double step_scale = 1.0;
    Eigen::VectorXd candidate;
    Eigen::VectorXd candidate_eta;
    double candidate_ll = 0.0;
    bool improved = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      candidate = model.coefficients + step_scale * step;
      candidate_eta = design * candidate;
      candidate_ll = penalized_ll(candidate, candidate_eta);
      if (std::isfinite(candidate_ll) && candidate_ll >= current_ll) {
        improved = true;
        break;
      }
      step_scale *= 0.5;
    }
    model.iterations = iteration;
    if (!improved) {
      // Numerical floor: no scaled Newton step improves the objective.
      model.converged = true;
      break;
    }

    const double max_step =
        (candidate - model.coefficients).cwiseAbs().maxCoeff();
    model.coefficients = candidate;
    eta = candidate_eta;
    current_ll = candidate_ll;
    model.log_likelihood_trace.push_back(current_ll);

    if (max_step < options.tolerance) {
      model.converged = true;
      break;
    }
    if (options.ridge == 0.0 &&
        model.coefficients.norm() > options.coefficient_norm_cap) {
      throw Error(ErrorCode::kSeparation,
                  "deviance still improving at coefficient norm " +
                      std::to_string(model.coefficients.norm()) +
                      "; labels look quasi-separated (retry with ridge)");
    }
  }

  model.final_deviance =
      -2.0 * bernoulli_log_likelihood(eta, labels, weights);
  return model;
}

Eigen::VectorXd predict_proba(const LogisticModel& model,
                              const Eigen::MatrixXd& features) {
  if (features.cols() + 1 != model.coefficients.size()) {
    throw Error(ErrorCode::kArityMismatch,
                "feature arity does not match model coefficient count");
  }
  Eigen::VectorXd eta =
      Eigen::VectorXd::Constant(features.rows(), model.coefficients[0]);
  if (features.cols() > 0) {
    eta += features * model.coefficients.tail(features.cols());
  }
  return eta.array()
      .unaryExpr([](double x) { return sigmoid(x); })
      .max(kProbabilityFloor)
      .min(1.0 - kProbabilityFloor)
      .matrix();
}

LinearModel fit_ols(const Eigen::MatrixXd& features,
                    const Eigen::VectorXd& response) {
  if (features.rows() != response.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature rows do not match response length");
  }
  const Eigen::MatrixXd design = with_intercept(features);
  if (design.rows() < design.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least as many rows as coefficients");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < design.cols()) {
    throw Error(ErrorCode::kRankDeficient,
                "design matrix is rank deficient after intercept "
                "augmentation");
  }
  return LinearModel{qr.solve(response)};
}

Eigen::VectorXd predict_linear(const LinearModel& model,
                               const Eigen::MatrixXd& features) {
  if (features.cols() + 1 != model.coefficients.size()) {
    throw Error(ErrorCode::kArityMismatch,
                "feature arity does not match model coefficient count");
  }
  Eigen::VectorXd prediction =
      Eigen::VectorXd::Constant(features.rows(), model.coefficients[0]);
  if (features.cols() > 0) {
    prediction += features * model.coefficients.tail(features.cols());
  }
  return prediction;
}

}  // namespace abide
