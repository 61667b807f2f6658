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
#ifndef ABIDE_DGP_HPP_
#define ABIDE_DGP_HPP_

#include <cstdint>

#include "abide/data_model.hpp"

namespace abide {

enum class Scenario {
  kTrueConfounders,         // store (x1, x2)
  kTransformedConfounders,  // store (z1, z2) = (exp(x1/2), x2^2 - x2 + x1*x2)
};

// Synthetic survey experiment: two latent exponential confounders drive both
// a binary sentiment outcome and a treatment-dependent response propensity.
//   X1 ~ Exp(rate 2), X2 ~ Exp(rate 3)
//   Y  ~ Bernoulli(sigmoid(2 X1 - 1.5 X2))
//   T  ~ Bernoulli(0.5)
//   D  ~ Bernoulli(sigmoid(T X1 - X2 - 2)), outcome visible iff D = 1
// The sentiment index is free of T, so both ATE and ATETR are exactly zero
// while the observed respondent means differ.
struct DgpConfig {
  double rate_x1 = 2.0;
  double rate_x2 = 3.0;
  double sentiment_coef_x1 = 2.0;
  double sentiment_coef_x2 = -1.5;
  double response_intercept = -2.0;
  Scenario scenario = Scenario::kTrueConfounders;
  std::uint64_t seed = 0;
  // Fair coin per unit by default; true assigns exactly floor(n/2) units to
  // treatment via a seeded ranking.
  bool exact_split = false;
};

// Population-level quantities implied by the configuration.
struct TruthStats {
  double ate = 0.0;
  double atetr = 0.0;
  double resp_rate_treated = 0.0;   // E[D(1)]
  double resp_rate_control = 0.0;   // E[D(0)]
  double observed_gap = 0.0;        // E[Y(1)|D(1)=1] - E[Y(0)|D(0)=1]
  double mean_outcome = 0.0;        // E[Y], identical across arms
  double resp_mean_treated = 0.0;   // E[Y|D(1)=1]
  double resp_mean_control = 0.0;   // E[Y|D(0)=1]
};

// Deterministic given (config.seed, replicate, unit index); any unit can be
// regenerated in isolation. Scenario choice changes only the stored
// covariates, never the (T, D, Y) triple.
ExperimentDataset generate_population(std::size_t n, const DgpConfig& config,
                                      std::uint64_t replicate = 0);

// Computes TruthStats by 2-D Simpson quadrature over the joint exponential
// density, truncated at the 1 - 1e-8 quantile per coordinate and refined
// until every quantity moves less than `tolerance`. ATE and ATETR are exact
// zeros (the sentiment index does not involve T); the quadrature cross-check
// of that identity must agree within tolerance or the call throws
// QuadratureNotConverged.
TruthStats population_truths(const DgpConfig& config, double tolerance = 1e-5);

// Per-unit oracles used by diagnostic tests.
double true_response_propensity(const DgpConfig& config, bool treated,
                                double x1, double x2);
double true_outcome_probability(const DgpConfig& config, double x1, double x2);

}  // namespace abide

#endif  // ABIDE_DGP_HPP_
