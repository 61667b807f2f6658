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
#include <benchmark/benchmark.h>

#include "abide/balancing.hpp"
#include "abide/dgp.hpp"
#include "abide/estimators.hpp"
#include "abide/glm.hpp"

namespace {

using namespace abide;

ExperimentDataset make_population(std::size_t n) {
  DgpConfig config;
  config.seed = 1234;
  return generate_population(n, config);
}

void BM_GeneratePopulation(benchmark::State& state) {
  DgpConfig config;
  config.seed = 99;
  for (auto _ : state) {
    auto dataset = generate_population(state.range(0), config);
    benchmark::DoNotOptimize(dataset);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratePopulation)->Arg(10000)->Arg(100000);

void BM_FitLogistic(benchmark::State& state) {
  auto dataset = make_population(state.range(0));
  Eigen::MatrixXd features(dataset.size(), 2);
  Eigen::VectorXd labels(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& record = dataset.records()[i];
    features(i, 0) = record.covariates[0];
    features(i, 1) = record.covariates[1];
    labels[i] = record.responded ? 1.0 : 0.0;
  }
  for (auto _ : state) {
    auto model = fit_logistic(features, labels);
    benchmark::DoNotOptimize(model);
  }
}
BENCHMARK(BM_FitLogistic)->Arg(10000)->Arg(100000);

void BM_EntropyBalance(benchmark::State& state) {
  auto dataset = make_population(10000);
  auto strata = partition(dataset);
  Eigen::MatrixXd source(strata.control_respondents.size(), 2);
  for (std::size_t i = 0; i < strata.control_respondents.size(); ++i) {
    source(i, 0) = strata.control_respondents[i].covariates[0];
    source(i, 1) = strata.control_respondents[i].covariates[1];
  }
  Eigen::MatrixXd target(strata.treated_respondents.size(), 2);
  for (std::size_t i = 0; i < strata.treated_respondents.size(); ++i) {
    target(i, 0) = strata.treated_respondents[i].covariates[0];
    target(i, 1) = strata.treated_respondents[i].covariates[1];
  }
  const Eigen::VectorXd moments = target.colwise().mean().transpose();
  for (auto _ : state) {
    auto result = entropy_balance(source, moments);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_EntropyBalance);

void BM_AdversarialBalance(benchmark::State& state) {
  auto dataset = make_population(10000);
  auto strata = partition(dataset);
  Eigen::MatrixXd source(strata.control_respondents.size(), 2);
  for (std::size_t i = 0; i < strata.control_respondents.size(); ++i) {
    source(i, 0) = strata.control_respondents[i].covariates[0];
    source(i, 1) = strata.control_respondents[i].covariates[1];
  }
  Eigen::MatrixXd target(strata.treated_respondents.size(), 2);
  for (std::size_t i = 0; i < strata.treated_respondents.size(); ++i) {
    target(i, 0) = strata.treated_respondents[i].covariates[0];
    target(i, 1) = strata.treated_respondents[i].covariates[1];
  }
  for (auto _ : state) {
    auto result = adversarial_balance(source, target);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_AdversarialBalance);

void BM_FullEstimatorSuite(benchmark::State& state) {
  auto dataset = make_population(10000);
  EstimatorParams params;
  for (auto _ : state) {
    for (Estimand estimand : {Estimand::kAte, Estimand::kAtetr}) {
      for (const auto& name : estimator_names(estimand)) {
        auto result = run_estimator(estimand, name, dataset, params);
        benchmark::DoNotOptimize(result);
      }
    }
  }
}
BENCHMARK(BM_FullEstimatorSuite);

void BM_PopulationTruths(benchmark::State& state) {
  DgpConfig config;
  for (auto _ : state) {
    auto truth = population_truths(config);
    benchmark::DoNotOptimize(truth);
  }
}
BENCHMARK(BM_PopulationTruths);

}  // namespace
