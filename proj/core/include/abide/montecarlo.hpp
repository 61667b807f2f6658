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
#ifndef ABIDE_MONTECARLO_HPP_
#define ABIDE_MONTECARLO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "abide/dgp.hpp"
#include "abide/estimators.hpp"

namespace abide {

enum class EstimandSelection { kAte, kAtetr, kBoth };

struct BenchmarkConfig {
  int replicates = 500;           // benchmark study uses 5000
  std::size_t n_per_replicate = 10000;
  DgpConfig dgp;                  // master seed and scenario live here
  EstimandSelection estimand = EstimandSelection::kBoth;
  // Estimator name filter; empty selects every estimator of each estimand.
  std::vector<std::string> estimators;
  int parallelism = 1;            // 0 = hardware concurrency
  EstimatorParams params;
};

// Bias follows the study's footnote orientation, truth - mean(estimates);
// the opposite orientation is carried alongside because the study's tables
// are only consistent in magnitude.
struct SummaryStats {
  double bias = 0.0;
  double bias_opposite = 0.0;
  double mae = 0.0;  // median absolute error
  double mse = 0.0;
};

SummaryStats summarize(const std::vector<double>& estimates, double truth);

struct BenchmarkRow {
  Estimand estimand = Estimand::kAte;
  std::string estimator;
  SummaryStats stats;
  int n_success = 0;
  int n_failed = 0;
  bool flagged = false;  // failure rate above 1%
  // Estimate per replicate; nullopt marks a failed replicate.
  std::vector<std::optional<double>> per_replicate;
  // Successes only, in replicate order.
  std::vector<double> estimates;
};

struct BenchmarkReport {
  BenchmarkConfig config;
  TruthStats truth;
  std::vector<BenchmarkRow> rows;

  const BenchmarkRow* find(Estimand estimand, std::string_view name) const;
};

// Runs the replicated simulation study. Deterministic for a fixed master
// seed regardless of the worker count: replicate r always draws population
// (seed, r) and results land in replicate-indexed slots. Estimator failures
// are dropped from summaries and counted per row.
BenchmarkReport run_benchmark(const BenchmarkConfig& config);

}  // namespace abide

#endif  // ABIDE_MONTECARLO_HPP_
