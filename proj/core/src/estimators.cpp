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
#include "abide/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "abide/glm.hpp"

namespace abide {

namespace {

void add_warning(std::vector<std::string>* warnings, std::string message) {
  if (warnings != nullptr) warnings->push_back(std::move(message));
}

std::vector<int> resolve_selector(const CovariateSelector& selector,
                                  std::size_t arity) {
  if (selector.empty()) {
    std::vector<int> all(arity);
    for (std::size_t i = 0; i < arity; ++i) all[i] = static_cast<int>(i);
    return all;
  }
  for (int index : selector) {
    if (index < 0 || static_cast<std::size_t>(index) >= arity) {
      throw Error(ErrorCode::kArityMismatch,
                  "covariate selector index " + std::to_string(index) +
                      " out of range for arity " + std::to_string(arity));
    }
  }
  return selector;
}

Eigen::MatrixXd covariate_matrix(std::span<const UnitRecord> records,
                                 const std::vector<int>& columns) {
  Eigen::MatrixXd features(records.size(), columns.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      features(i, j) = records[i].covariates[columns[j]];
    }
  }
  return features;
}

struct ArmData {
  Eigen::MatrixXd covariates;       // all units
  Eigen::VectorXd responded;        // 0/1 per unit
  Eigen::VectorXd outcomes;         // zero where missing
  Eigen::MatrixXd resp_covariates;  // respondents only
  Eigen::VectorXd resp_outcomes;
  std::size_t n_respondents = 0;
};

ArmData extract_arm(std::span<const UnitRecord> arm,
                    const std::vector<int>& columns) {
  if (arm.empty()) {
    throw Error(ErrorCode::kEmptyArm, "arm has no records");
  }
  ArmData data;
  data.covariates = covariate_matrix(arm, columns);
  data.responded.resize(arm.size());
  data.outcomes = Eigen::VectorXd::Zero(arm.size());
  for (std::size_t i = 0; i < arm.size(); ++i) {
    data.responded[i] = arm[i].responded ? 1.0 : 0.0;
    if (arm[i].responded) {
      data.outcomes[i] = *arm[i].outcome;
      ++data.n_respondents;
    }
  }
  if (data.n_respondents == 0) {
    throw Error(ErrorCode::kNoRespondentsInArm, "arm has no respondents");
  }
  data.resp_covariates.resize(data.n_respondents, columns.size());
  data.resp_outcomes.resize(data.n_respondents);
  std::size_t j = 0;
  for (std::size_t i = 0; i < arm.size(); ++i) {
    if (arm[i].responded) {
      data.resp_covariates.row(j) = data.covariates.row(i);
      data.resp_outcomes[j] = data.outcomes[i];
      ++j;
    }
  }
  return data;
}

bool constant_labels(const Eigen::VectorXd& labels) {
  return labels.size() > 0 &&
         (labels.array() == labels[0]).all();
}

// Outcome model predictions for an arbitrary prediction matrix. Respondent
// outcomes that are all identical make the likelihood degenerate, so the
// constant itself is the fitted model.
Eigen::VectorXd outcome_model_predictions(const ArmData& arm,
                                          const Eigen::MatrixXd& where,
                                          std::vector<std::string>* warnings) {
  if (constant_labels(arm.resp_outcomes)) {
    add_warning(warnings,
                "respondent outcomes are constant; using a constant model");
    return Eigen::VectorXd::Constant(where.rows(), arm.resp_outcomes[0]);
  }
  const LogisticModel model =
      fit_logistic(arm.resp_covariates, arm.resp_outcomes);
  return predict_proba(model, where);
}

// Split a validated dataset into per-arm record vectors (treated, control).
std::pair<std::vector<UnitRecord>, std::vector<UnitRecord>> split_arms(
    const ExperimentDataset& dataset) {
  std::pair<std::vector<UnitRecord>, std::vector<UnitRecord>> arms;
  for (const UnitRecord& record : dataset.records()) {
    (record.treatment ? arms.first : arms.second).push_back(record);
  }
  return arms;
}

EstimateResult respondent_mean_difference(const ExperimentDataset& dataset,
                                          Estimand estimand,
                                          std::string estimator) {
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (const UnitRecord& record : dataset.records()) {
    if (!record.responded) continue;
    const int arm = record.treatment ? 1 : 0;
    sum[arm] += *record.outcome;
    ++count[arm];
  }
  for (int arm : {1, 0}) {
    if (count[arm] == 0) {
      throw Error(ErrorCode::kNoRespondentsInArm,
                  std::string("no respondents with T=") + std::to_string(arm));
    }
  }
  EstimateResult result;
  result.estimand = estimand;
  result.estimator = std::move(estimator);
  result.estimate = sum[1] / count[1] - sum[0] / count[0];
  return result;
}

// Response-propensity model over both arms jointly, with the treatment flag
// as an extra regressor. Returns per-unit predictions split back by arm.
std::pair<Eigen::VectorXd, Eigen::VectorXd> pooled_response_propensities(
    const ArmData& treated, const ArmData& control) {
  const Eigen::Index nt = treated.covariates.rows();
  const Eigen::Index nc = control.covariates.rows();
  const Eigen::Index dim = treated.covariates.cols();
  Eigen::MatrixXd features(nt + nc, dim + 1);
  features.topLeftCorner(nt, dim) = treated.covariates;
  features.bottomLeftCorner(nc, dim) = control.covariates;
  features.col(dim).head(nt).setOnes();
  features.col(dim).tail(nc).setZero();
  Eigen::VectorXd labels(nt + nc);
  labels.head(nt) = treated.responded;
  labels.tail(nc) = control.responded;
  const LogisticModel model = fit_logistic(features, labels);
  const Eigen::VectorXd predictions = predict_proba(model, features);
  return {predictions.head(nt), predictions.tail(nc)};
}

Eigen::VectorXd gather_respondent_values(const ArmData& arm,
                                         const Eigen::VectorXd& per_unit) {
  Eigen::VectorXd values(arm.n_respondents);
  std::size_t j = 0;
  for (Eigen::Index i = 0; i < per_unit.size(); ++i) {
    if (arm.responded[i] != 0.0) values[j++] = per_unit[i];
  }
  return values;
}

double hajek_respondent_mean(const ArmData& arm,
                             const Eigen::VectorXd& unit_propensities,
                             double clip,
                             std::vector<std::string>* warnings) {
  if (arm.n_respondents == arm.responded.size()) {
    add_warning(warnings, "every unit responded; weights are uniform");
    return arm.resp_outcomes.mean();
  }
  const Eigen::VectorXd resp_propensities =
      gather_respondent_values(arm, unit_propensities);
  const std::size_t clipped =
      (resp_propensities.array() < clip).count() +
      (resp_propensities.array() > 1.0 - clip).count();
  if (clipped * 20 > arm.n_respondents) {
    add_warning(warnings,
                std::to_string(clipped) + " of " +
                    std::to_string(arm.n_respondents) +
                    " propensities were clipped");
  }
  const WeightVector weights =
      ipw_weights(resp_propensities, IpwMode::kMeanRecovery, clip);
  return weighted_mean(arm.resp_outcomes, weights);
}

Eigen::VectorXd arm_response_propensities(
    const ArmData& arm, const std::optional<Eigen::VectorXd>& supplied,
    std::vector<std::string>* warnings) {
  if (supplied.has_value()) {
    if (supplied->size() != arm.responded.size()) {
      throw Error(ErrorCode::kArityMismatch,
                  "supplied propensities do not match arm size");
    }
    return *supplied;
  }
  if (arm.n_respondents == arm.responded.size()) {
    add_warning(warnings, "every unit responded; propensity fixed at 1");
    return Eigen::VectorXd::Ones(arm.responded.size());
  }
  const LogisticModel model = fit_logistic(arm.covariates, arm.responded);
  return predict_proba(model, arm.covariates);
}

EstimateResult with_params(Estimand estimand, std::string estimator) {
  EstimateResult result;
  result.estimand = estimand;
  result.estimator = std::move(estimator);
  return result;
}

}  // namespace

std::string_view estimand_name(Estimand estimand) {
  return estimand == Estimand::kAte ? "ate" : "atetr";
}

EstimateResult ate_naive(const ExperimentDataset& dataset) {
  return respondent_mean_difference(dataset, Estimand::kAte, "naive");
}

double arm_mean_or(std::span<const UnitRecord> arm,
                   const CovariateSelector& selector,
                   std::vector<std::string>* warnings) {
  const std::vector<int> columns =
      resolve_selector(selector, arm.empty() ? 0 : arm[0].covariates.size());
  const ArmData data = extract_arm(arm, columns);
  return outcome_model_predictions(data, data.covariates, warnings).mean();
}

double arm_mean_ipw(std::span<const UnitRecord> arm,
                    const CovariateSelector& selector, double clip,
                    const std::optional<Eigen::VectorXd>& propensities,
                    std::vector<std::string>* warnings) {
  const std::vector<int> columns =
      resolve_selector(selector, arm.empty() ? 0 : arm[0].covariates.size());
  const ArmData data = extract_arm(arm, columns);
  if (data.n_respondents == data.responded.size()) {
    add_warning(warnings, "every unit responded; returning respondent mean");
    return data.resp_outcomes.mean();
  }
  const Eigen::VectorXd unit_propensities =
      arm_response_propensities(data, propensities, warnings);
  return hajek_respondent_mean(data, unit_propensities, clip, warnings);
}

double aipw_mean(const Eigen::VectorXd& outcome_predictions,
                 const Eigen::VectorXd& response_propensities,
                 const Eigen::VectorXd& responded,
                 const Eigen::VectorXd& outcomes) {
  const Eigen::Index n = outcome_predictions.size();
  if (response_propensities.size() != n || responded.size() != n ||
      outcomes.size() != n) {
    throw Error(ErrorCode::kArityMismatch,
                "AIPW component vectors differ in length");
  }
  if (n == 0) {
    throw Error(ErrorCode::kEmptyVector, "AIPW needs at least one unit");
  }
  const Eigen::ArrayXd correction =
      responded.array() * (outcomes - outcome_predictions).array() /
      response_propensities.array();
  return outcome_predictions.mean() + correction.mean();
}

double arm_mean_dr(std::span<const UnitRecord> arm,
                   const CovariateSelector& selector, double clip,
                   const std::optional<Eigen::VectorXd>& propensities,
                   std::vector<std::string>* warnings) {
  const std::vector<int> columns =
      resolve_selector(selector, arm.empty() ? 0 : arm[0].covariates.size());
  const ArmData data = extract_arm(arm, columns);
  const Eigen::VectorXd predictions =
      outcome_model_predictions(data, data.covariates, warnings);
  Eigen::VectorXd unit_propensities;
  if (data.n_respondents == data.responded.size()) {
    add_warning(warnings, "every unit responded; propensity fixed at 1");
    unit_propensities = Eigen::VectorXd::Ones(data.responded.size());
  } else {
    unit_propensities =
        arm_response_propensities(data, propensities, warnings)
            .array()
            .max(clip)
            .min(1.0 - clip)
            .matrix();
  }
  return aipw_mean(predictions, unit_propensities, data.responded,
                   data.outcomes);
}

double arm_mean_ab(std::span<const UnitRecord> arm,
                   const CovariateSelector& selector,
                   const AdversarialBalanceConfig& config,
                   std::vector<std::string>* warnings,
                   BalanceDiagnostics* diagnostics) {
  const std::vector<int> columns =
      resolve_selector(selector, arm.empty() ? 0 : arm[0].covariates.size());
  const ArmData data = extract_arm(arm, columns);
  AdversarialBalanceResult balance;
  try {
    balance = adversarial_balance(data.resp_covariates, data.covariates,
                                  config);
  } catch (const Error& error) {
    if (error.code() == ErrorCode::kSeparation ||
        error.code() == ErrorCode::kSingularSystem) {
      throw Error(ErrorCode::kDiscriminatorFailure, error.what());
    }
    throw;
  }
  if (diagnostics != nullptr) *diagnostics = balance.diagnostics;
  if (data.n_respondents == 1) {
    add_warning(warnings, "single respondent carries all weight");
  }
  return weighted_mean(data.resp_outcomes, balance.weights);
}

EstimateResult ate_from_arm_means(double theta1, double theta0,
                                  std::string estimator) {
  if (!std::isfinite(theta1) || !std::isfinite(theta0)) {
    throw Error(ErrorCode::kInvalidArgument, "arm means must be finite");
  }
  EstimateResult result = with_params(Estimand::kAte, std::move(estimator));
  result.estimate = theta1 - theta0;
  result.arm_components = {theta1, theta0};
  return result;
}

EstimateResult ate_or(const ExperimentDataset& dataset,
                      const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  std::vector<std::string> warnings;
  const double theta1 = arm_mean_or(treated, params.selector, &warnings);
  const double theta0 = arm_mean_or(control, params.selector, &warnings);
  EstimateResult result = ate_from_arm_means(theta1, theta0, "or");
  result.warnings = std::move(warnings);
  return result;
}

EstimateResult ate_ipw(const ExperimentDataset& dataset,
                       const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  const std::vector<int> columns =
      resolve_selector(params.selector, dataset.schema().arity());
  const ArmData treated_data = extract_arm(treated, columns);
  const ArmData control_data = extract_arm(control, columns);

  std::vector<std::string> warnings;
  double theta1, theta0;
  const bool all_respond =
      treated_data.n_respondents == treated_data.responded.size() &&
      control_data.n_respondents == control_data.responded.size();
  if (all_respond) {
    warnings.push_back("every unit responded; returning respondent means");
    theta1 = treated_data.resp_outcomes.mean();
    theta0 = control_data.resp_outcomes.mean();
  } else {
    const auto [treated_propensities, control_propensities] =
        pooled_response_propensities(treated_data, control_data);
    theta1 = hajek_respondent_mean(treated_data, treated_propensities,
                                   params.clip, &warnings);
    theta0 = hajek_respondent_mean(control_data, control_propensities,
                                   params.clip, &warnings);
  }
  EstimateResult result = ate_from_arm_means(theta1, theta0, "ipw");
  result.warnings = std::move(warnings);
  return result;
}

EstimateResult ate_dr(const ExperimentDataset& dataset,
                      const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  const std::vector<int> columns =
      resolve_selector(params.selector, dataset.schema().arity());
  const ArmData treated_data = extract_arm(treated, columns);
  const ArmData control_data = extract_arm(control, columns);

  std::vector<std::string> warnings;
  std::optional<Eigen::VectorXd> treated_propensities;
  std::optional<Eigen::VectorXd> control_propensities;
  const bool any_nonrespondent =
      treated_data.n_respondents < treated_data.responded.size() ||
      control_data.n_respondents < control_data.responded.size();
  if (any_nonrespondent) {
    auto pooled = pooled_response_propensities(treated_data, control_data);
    treated_propensities = std::move(pooled.first);
    control_propensities = std::move(pooled.second);
  }
  const double theta1 = arm_mean_dr(treated, params.selector, params.clip,
                                    treated_propensities, &warnings);
  const double theta0 = arm_mean_dr(control, params.selector, params.clip,
                                    control_propensities, &warnings);
  EstimateResult result = ate_from_arm_means(theta1, theta0, "dr");
  result.warnings = std::move(warnings);
  return result;
}

EstimateResult ate_ab(const ExperimentDataset& dataset,
                      const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  std::vector<std::string> warnings;
  BalanceDiagnostics treated_diag, control_diag;
  const double theta1 =
      arm_mean_ab(treated, params.selector, params.ab, &warnings,
                  &treated_diag);
  const double theta0 =
      arm_mean_ab(control, params.selector, params.ab, &warnings,
                  &control_diag);
  EstimateResult result = ate_from_arm_means(theta1, theta0, "ab");
  result.warnings = std::move(warnings);
  // Keep the weaker of the two arms' diagnostics.
  result.diagnostics = treated_diag.max_abs_moment_gap >
                               control_diag.max_abs_moment_gap
                           ? treated_diag
                           : control_diag;
  return result;
}

EstimateResult atetr_naive(const ExperimentDataset& dataset) {
  return respondent_mean_difference(dataset, Estimand::kAtetr, "naive");
}

EstimateResult atetr_or(const ExperimentDataset& dataset,
                        const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  const std::vector<int> columns =
      resolve_selector(params.selector, dataset.schema().arity());
  const ArmData treated_data = extract_arm(treated, columns);
  const ArmData control_data = extract_arm(control, columns);

  EstimateResult result = with_params(Estimand::kAtetr, "or");
  // Counterfactual model trained on control respondents; its predictions
  // are averaged over the whole treated arm, matching the benchmark study's
  // estimator (its Lemma targets treated respondents, but the reported
  // tables follow the arm-wide average).
  const Eigen::VectorXd counterfactual = outcome_model_predictions(
      control_data, treated_data.covariates, &result.warnings);
  result.estimate =
      treated_data.resp_outcomes.mean() - counterfactual.mean();
  return result;
}

EstimateResult atetr_ipw(const ExperimentDataset& dataset,
                         const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  const std::vector<int> columns =
      resolve_selector(params.selector, dataset.schema().arity());
  const ArmData treated_data = extract_arm(treated, columns);
  const ArmData control_data = extract_arm(control, columns);

  // Treatment propensity among respondents only.
  const Eigen::Index nt = treated_data.n_respondents;
  const Eigen::Index nc = control_data.n_respondents;
  Eigen::MatrixXd features(nt + nc, columns.size());
  features.topRows(nt) = treated_data.resp_covariates;
  features.bottomRows(nc) = control_data.resp_covariates;
  Eigen::VectorXd labels(nt + nc);
  labels.head(nt).setOnes();
  labels.tail(nc).setZero();
  const LogisticModel model = fit_logistic(features, labels);
  const Eigen::VectorXd propensities =
      predict_proba(model, control_data.resp_covariates);

  EstimateResult result = with_params(Estimand::kAtetr, "ipw");
  const Eigen::ArrayXd clipped =
      propensities.array().max(params.clip).min(1.0 - params.clip);
  const Eigen::ArrayXd odds = clipped / (1.0 - clipped);
  const double denominator =
      params.atetr_ipw_hajek ? odds.sum() : static_cast<double>(nt);
  const double counterfactual_mean =
      (odds * control_data.resp_outcomes.array()).sum() / denominator;
  result.estimate = treated_data.resp_outcomes.mean() - counterfactual_mean;

  BalanceDiagnostics diagnostics;
  diagnostics.effective_sample_size =
      effective_sample_size(Eigen::VectorXd(odds.matrix()));
  result.diagnostics = diagnostics;
  if (diagnostics.effective_sample_size < 0.1 * static_cast<double>(nc)) {
    result.warnings.push_back(
        "ExtremeWeights: effective sample size " +
        std::to_string(diagnostics.effective_sample_size) + " of " +
        std::to_string(nc) + " control respondents");
  }
  return result;
}

EstimateResult atetr_cc(const ExperimentDataset& dataset,
                        const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  const std::vector<int> columns =
      resolve_selector(params.selector, dataset.schema().arity());
  const ArmData treated_data = extract_arm(treated, columns);
  const ArmData control_data = extract_arm(control, columns);

  const Eigen::Index nt = treated_data.n_respondents;
  const Eigen::Index nc = control_data.n_respondents;
  const Eigen::Index dim = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd design(nt + nc, dim + 1);
  design.col(0).head(nt).setOnes();
  design.col(0).tail(nc).setZero();
  design.rightCols(dim).topRows(nt) = treated_data.resp_covariates;
  design.rightCols(dim).bottomRows(nc) = control_data.resp_covariates;
  Eigen::VectorXd outcomes(nt + nc);
  outcomes.head(nt) = treated_data.resp_outcomes;
  outcomes.tail(nc) = control_data.resp_outcomes;

  const LinearModel model = fit_ols(design, outcomes);
  EstimateResult result = with_params(Estimand::kAtetr, "cc");
  result.estimate = model.coefficients[1];  // treatment coefficient
  return result;
}

EstimateResult atetr_eb(const ExperimentDataset& dataset,
                        const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  const std::vector<int> columns =
      resolve_selector(params.selector, dataset.schema().arity());
  const ArmData treated_data = extract_arm(treated, columns);
  const ArmData control_data = extract_arm(control, columns);

  const Eigen::VectorXd target_moments =
      treated_data.resp_covariates.colwise().mean().transpose();
  const EntropyBalanceResult balance =
      entropy_balance(control_data.resp_covariates, target_moments);

  EstimateResult result = with_params(Estimand::kAtetr, "eb");
  result.estimate =
      treated_data.resp_outcomes.mean() -
      weighted_mean(control_data.resp_outcomes, balance.weights);
  result.diagnostics = balance.diagnostics;
  return result;
}

EstimateResult atetr_ab(const ExperimentDataset& dataset,
                        const EstimatorParams& params) {
  const auto [treated, control] = split_arms(dataset);
  const std::vector<int> columns =
      resolve_selector(params.selector, dataset.schema().arity());
  const ArmData treated_data = extract_arm(treated, columns);
  const ArmData control_data = extract_arm(control, columns);

  AdversarialBalanceResult balance;
  try {
    balance = adversarial_balance(control_data.resp_covariates,
                                  treated_data.resp_covariates, params.ab);
  } catch (const Error& error) {
    if (error.code() == ErrorCode::kSeparation ||
        error.code() == ErrorCode::kSingularSystem) {
      throw Error(ErrorCode::kDiscriminatorFailure, error.what());
    }
    throw;
  }

  EstimateResult result = with_params(Estimand::kAtetr, "ab");
  result.estimate =
      treated_data.resp_outcomes.mean() -
      weighted_mean(control_data.resp_outcomes, balance.weights);
  result.diagnostics = balance.diagnostics;
  return result;
}

const std::vector<std::string>& estimator_names(Estimand estimand) {
  static const std::vector<std::string> ate_names = {"naive", "or", "ipw",
                                                     "dr", "ab"};
  static const std::vector<std::string> atetr_names = {"naive", "or",  "ipw",
                                                       "cc",    "eb", "ab"};
  return estimand == Estimand::kAte ? ate_names : atetr_names;
}

EstimateResult run_estimator(Estimand estimand, std::string_view name,
                             const ExperimentDataset& dataset,
                             const EstimatorParams& params) {
  if (estimand == Estimand::kAte) {
    if (name == "naive") return ate_naive(dataset);
    if (name == "or") return ate_or(dataset, params);
    if (name == "ipw") return ate_ipw(dataset, params);
    if (name == "dr") return ate_dr(dataset, params);
    if (name == "ab") return ate_ab(dataset, params);
  } else {
    if (name == "naive") return atetr_naive(dataset);
    if (name == "or") return atetr_or(dataset, params);
    if (name == "ipw") return atetr_ipw(dataset, params);
    if (name == "cc") return atetr_cc(dataset, params);
    if (name == "eb") return atetr_eb(dataset, params);
    if (name == "ab") return atetr_ab(dataset, params);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown estimator '" + std::string(name) + "' for estimand " +
                  std::string(estimand_name(estimand)));
}

}  // namespace abide
