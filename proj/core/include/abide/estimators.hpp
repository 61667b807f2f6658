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
#ifndef ABIDE_ESTIMATORS_HPP_
#define ABIDE_ESTIMATORS_HPP_

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "abide/balancing.hpp"
#include "abide/data_model.hpp"

namespace abide {

enum class Estimand { kAte, kAtetr };

std::string_view estimand_name(Estimand estimand);

struct EstimateResult {
  Estimand estimand = Estimand::kAte;
  std::string estimator;
  double estimate = 0.0;
  // (theta1, theta0) for ATE estimators assembled per arm.
  std::optional<std::pair<double, double>> arm_components;
  std::optional<BalanceDiagnostics> diagnostics;
  std::vector<std::string> warnings;
};

// Covariate column indices to feed the models; empty means all columns.
using CovariateSelector = std::vector<int>;

struct EstimatorParams {
  CovariateSelector selector;
  // Propensity clip for inverse weighting, in (0, 0.5). The treatment-odds
  // weighting of the ATETR IPW estimator shares this knob; pass something
  // tiny (e.g. 1e-9) to reproduce the unclipped behavior of the benchmark
  // study.
  double clip = 0.01;
  // Hajek-normalize the ATETR IPW control mean instead of dividing the
  // odds-weighted sum by the treated-respondent count.
  bool atetr_ipw_hajek = false;
  AdversarialBalanceConfig ab;
};

// ---------------------------------------------------------------------------
// ATE family: each arm is an independent missing-data problem; the ATE is the
// difference of consistently estimated arm means.

EstimateResult ate_naive(const ExperimentDataset& dataset);

// Outcome-regression arm mean: fits a logistic outcome model on the arm's
// respondents and averages its predictions over every unit in the arm.
double arm_mean_or(std::span<const UnitRecord> arm,
                   const CovariateSelector& selector = {},
                   std::vector<std::string>* warnings = nullptr);

// Inverse-propensity arm mean: Hajek-weighted respondent outcome mean with
// mean-recovery weights. The response propensity is fitted on the arm's own
// units unless `propensities` supplies per-unit values (aligned with `arm`).
double arm_mean_ipw(
    std::span<const UnitRecord> arm, const CovariateSelector& selector = {},
    double clip = 0.01,
    const std::optional<Eigen::VectorXd>& propensities = {},
    std::vector<std::string>* warnings = nullptr);

// Augmented IPW arm mean; consistent when either the outcome model or the
// response propensity is correct.
double arm_mean_dr(
    std::span<const UnitRecord> arm, const CovariateSelector& selector = {},
    double clip = 0.01,
    const std::optional<Eigen::VectorXd>& propensities = {},
    std::vector<std::string>* warnings = nullptr);

// Adversarial-balancing arm mean: reweights the arm's respondents toward the
// whole arm and returns the weighted respondent outcome mean.
double arm_mean_ab(std::span<const UnitRecord> arm,
                   const CovariateSelector& selector = {},
                   const AdversarialBalanceConfig& config = {},
                   std::vector<std::string>* warnings = nullptr,
                   BalanceDiagnostics* diagnostics = nullptr);

// The AIPW combiner, exposed so the double-robustness halves can be checked
// with known-correct components. All vectors are aligned with the arm's
// units; `outcomes` carries zeros for non-respondents.
double aipw_mean(const Eigen::VectorXd& outcome_predictions,
                 const Eigen::VectorXd& response_propensities,
                 const Eigen::VectorXd& responded,
                 const Eigen::VectorXd& outcomes);

EstimateResult ate_from_arm_means(double theta1, double theta0,
                                  std::string estimator = "custom");

EstimateResult ate_or(const ExperimentDataset& dataset,
                      const EstimatorParams& params = {});
// Fits one response model on both arms jointly (treatment indicator as a
// regressor) and reuses it for each arm's Hajek mean, mirroring the
// benchmark study; per-arm fitting stays available through arm_mean_ipw.
EstimateResult ate_ipw(const ExperimentDataset& dataset,
                       const EstimatorParams& params = {});
EstimateResult ate_dr(const ExperimentDataset& dataset,
                      const EstimatorParams& params = {});
EstimateResult ate_ab(const ExperimentDataset& dataset,
                      const EstimatorParams& params = {});

// ---------------------------------------------------------------------------
// ATETR family: operates on respondents only; the counterfactual control
// mean for treated respondents is rebuilt by matching on covariates.

EstimateResult atetr_naive(const ExperimentDataset& dataset);
EstimateResult atetr_or(const ExperimentDataset& dataset,
                        const EstimatorParams& params = {});
EstimateResult atetr_ipw(const ExperimentDataset& dataset,
                         const EstimatorParams& params = {});
EstimateResult atetr_cc(const ExperimentDataset& dataset,
                        const EstimatorParams& params = {});
EstimateResult atetr_eb(const ExperimentDataset& dataset,
                        const EstimatorParams& params = {});
EstimateResult atetr_ab(const ExperimentDataset& dataset,
                        const EstimatorParams& params = {});

// ---------------------------------------------------------------------------
// Registry used by the CLI and the Monte Carlo harness.

const std::vector<std::string>& estimator_names(Estimand estimand);
EstimateResult run_estimator(Estimand estimand, std::string_view name,
                             const ExperimentDataset& dataset,
                             const EstimatorParams& params = {});

}  // namespace abide

#endif  // ABIDE_ESTIMATORS_HPP_
