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
#include "abide/dgp.hpp"

#include <cmath>

#include "abide/glm.hpp"
#include "abide/rng.hpp"
#include "gtest/gtest.h"

namespace abide {
namespace {

TEST(GeneratePopulation, DeterministicGivenSeed) {
  DgpConfig config;
  config.seed = 7;
  const ExperimentDataset first = generate_population(2000, config);
  const ExperimentDataset second = generate_population(2000, config);
  EXPECT_EQ(first.records(), second.records());
  EXPECT_EQ(first.schema(), second.schema());

  config.seed = 8;
  const ExperimentDataset other = generate_population(2000, config);
  EXPECT_NE(first.records(), other.records());
}

TEST(GeneratePopulation, ReplicatesAreIndependentStreams) {
  DgpConfig config;
  config.seed = 7;
  const ExperimentDataset rep0 = generate_population(500, config, 0);
  const ExperimentDataset rep1 = generate_population(500, config, 1);
  EXPECT_NE(rep0.records(), rep1.records());
}

// Response rates and the observed respondent gap at the million scale match
// the study's population statistics (15% / 9% response, 0.07 gap, zero
// population effect).
TEST(GeneratePopulation, MillionScaleMomentsMatchStudy) {
  DgpConfig config;
  config.seed = 123;
  const ExperimentDataset dataset = generate_population(1000000, config);
  std::size_t arm_n[2] = {0, 0}, arm_resp[2] = {0, 0};
  double resp_outcome_sum[2] = {0.0, 0.0};
  double outcome_sum[2] = {0.0, 0.0};  // includes latent draw via respondents only
  for (const UnitRecord& record : dataset.records()) {
    const int arm = record.treatment ? 1 : 0;
    ++arm_n[arm];
    if (record.responded) {
      ++arm_resp[arm];
      resp_outcome_sum[arm] += *record.outcome;
    }
  }
  (void)outcome_sum;
  const double resp_rate_treated = double(arm_resp[1]) / arm_n[1];
  const double resp_rate_control = double(arm_resp[0]) / arm_n[0];
  EXPECT_NEAR(resp_rate_treated, 0.15, 0.005);
  EXPECT_NEAR(resp_rate_control, 0.09, 0.005);
  const double gap = resp_outcome_sum[1] / arm_resp[1] -
                     resp_outcome_sum[0] / arm_resp[0];
  EXPECT_NEAR(gap, 0.07, 0.01);
}

// Scenario choice changes only the stored covariates: (T, responded,
// outcome) triples are identical unit by unit under one seed.
TEST(GeneratePopulation, ScenarioAffectsOnlyCovariates) {
  DgpConfig config;
  config.seed = 99;
  const ExperimentDataset plain = generate_population(5000, config);
  config.scenario = Scenario::kTransformedConfounders;
  const ExperimentDataset transformed = generate_population(5000, config);
  ASSERT_EQ(plain.size(), transformed.size());
  EXPECT_EQ(plain.schema().names, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(transformed.schema().names,
            (std::vector<std::string>{"z1", "z2"}));
  for (std::size_t i = 0; i < plain.size(); ++i) {
    const UnitRecord& a = plain.records()[i];
    const UnitRecord& b = transformed.records()[i];
    EXPECT_EQ(a.treatment, b.treatment);
    EXPECT_EQ(a.responded, b.responded);
    EXPECT_EQ(a.outcome, b.outcome);
    // z1 = exp(x1/2), z2 = x2^2 - x2 + x1*x2
    const double x1 = a.covariates[0], x2 = a.covariates[1];
    EXPECT_DOUBLE_EQ(b.covariates[0], std::exp(x1 / 2.0));
    EXPECT_DOUBLE_EQ(b.covariates[1], x2 * x2 - x2 + x1 * x2);
    EXPECT_GT(b.covariates[0], 1.0);
  }
}

TEST(GeneratePopulation, ExactSplitAssignsHalf) {
  DgpConfig config;
  config.seed = 41;
  config.exact_split = true;
  const ExperimentDataset dataset = generate_population(10001, config);
  std::size_t treated = 0;
  for (const UnitRecord& record : dataset.records()) {
    treated += record.treatment ? 1 : 0;
  }
  EXPECT_EQ(treated, 5000u);
}

TEST(GeneratePopulation, RejectsTinyPopulations) {
  DgpConfig config;
  EXPECT_THROW(generate_population(1, config), Error);
}

TEST(GeneratePopulation, RejectsNonPositiveRates) {
  DgpConfig config;
  config.rate_x1 = 0.0;
  EXPECT_THROW(generate_population(100, config), Error);
}

TEST(PopulationTruths, MatchesStudyTable) {
  const TruthStats truth = population_truths(DgpConfig{});
  EXPECT_NEAR(truth.resp_rate_treated, 0.15, 0.005);
  EXPECT_NEAR(truth.resp_rate_control, 0.09, 0.005);
  EXPECT_NEAR(truth.observed_gap, 0.07, 0.005);
  EXPECT_EQ(truth.ate, 0.0);
  EXPECT_EQ(truth.atetr, 0.0);
  EXPECT_GT(truth.resp_mean_treated, truth.resp_mean_control);
}

TEST(PopulationTruths, DeterministicAcrossCalls) {
  const TruthStats a = population_truths(DgpConfig{});
  const TruthStats b = population_truths(DgpConfig{});
  EXPECT_EQ(a.resp_rate_treated, b.resp_rate_treated);
  EXPECT_EQ(a.observed_gap, b.observed_gap);
}

// Quadrature against a Monte Carlo oracle over the latent potential
// outcomes. The full 1e7-draw comparison runs in the acceptance suite; one
// million draws here keeps the unit suite quick.
TEST(PopulationTruths, AgreesWithMonteCarloOracle) {
  const DgpConfig config;
  const TruthStats truth = population_truths(config);
  const std::size_t n = 1000000;
  double sum_resp[2] = {0.0, 0.0};
  double sum_joint[2] = {0.0, 0.0};
  double sum_outcome = 0.0;
  for (std::size_t unit = 0; unit < n; ++unit) {
    const rng::UnitStream stream(2718, 0, unit);
    const double x1 = stream.exponential(0, config.rate_x1);
    const double x2 = stream.exponential(1, config.rate_x2);
    const bool y = stream.bernoulli(3, true_outcome_probability(config, x1, x2));
    // Potential response under both assignments from one uniform draw.
    const double u = stream.uniform(4);
    const bool resp_treated = u < true_response_propensity(config, true, x1, x2);
    const bool resp_control = u < true_response_propensity(config, false, x1, x2);
    sum_resp[1] += resp_treated;
    sum_resp[0] += resp_control;
    sum_joint[1] += resp_treated && y;
    sum_joint[0] += resp_control && y;
    sum_outcome += y;
  }
  EXPECT_NEAR(sum_resp[1] / n, truth.resp_rate_treated, 0.003);
  EXPECT_NEAR(sum_resp[0] / n, truth.resp_rate_control, 0.003);
  EXPECT_NEAR(sum_outcome / n, truth.mean_outcome, 0.003);
  const double gap =
      sum_joint[1] / sum_resp[1] - sum_joint[0] / sum_resp[0];
  EXPECT_NEAR(gap, truth.observed_gap, 0.003);
}

TEST(TrueModelOracles, MatchClosedForms) {
  const DgpConfig config;
  EXPECT_DOUBLE_EQ(true_response_propensity(config, true, 2.0, 1.0),
                   sigmoid(2.0 - 1.0 - 2.0));
  EXPECT_DOUBLE_EQ(true_response_propensity(config, false, 2.0, 1.0),
                   sigmoid(-1.0 - 2.0));
  EXPECT_DOUBLE_EQ(true_outcome_probability(config, 0.5, 1.0),
                   sigmoid(2.0 * 0.5 - 1.5 * 1.0));
}

}  // namespace
}  // namespace abide
