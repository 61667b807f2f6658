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
#include "abide/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace abide {

SummaryStats summarize(const std::vector<double>& estimates, double truth) {
  if (estimates.empty()) {
    throw Error(ErrorCode::kEmptyVector, "no estimates to summarize");
  }
  const double n = static_cast<double>(estimates.size());
  double sum = 0.0;
  double sum_squared_error = 0.0;
  std::vector<double> absolute_errors;
  absolute_errors.reserve(estimates.size());
  for (double estimate : estimates) {
    sum += estimate;
    const double error = truth - estimate;
    sum_squared_error += error * error;
    absolute_errors.push_back(std::abs(error));
  }
  std::sort(absolute_errors.begin(), absolute_errors.end());

  SummaryStats stats;
  stats.bias = truth - sum / n;
  stats.bias_opposite = -stats.bias;
  stats.mse = sum_squared_error / n;
  const std::size_t half = estimates.size() / 2;
  stats.mae = estimates.size() % 2 == 1
                  ? absolute_errors[half]
                  : 0.5 * (absolute_errors[half - 1] + absolute_errors[half]);
  return stats;
}

const BenchmarkRow* BenchmarkReport::find(Estimand estimand,
                                          std::string_view name) const {
  for (const BenchmarkRow& row : rows) {
    if (row.estimand == estimand && row.estimator == name) return &row;
  }
  return nullptr;
}

namespace {

struct RowSpec {
  Estimand estimand;
  std::string estimator;
};

std::vector<RowSpec> plan_rows(const BenchmarkConfig& config) {
  std::vector<RowSpec> rows;
  const auto add_estimand = [&](Estimand estimand) {
    for (const std::string& name : estimator_names(estimand)) {
      if (!config.estimators.empty() &&
          std::find(config.estimators.begin(), config.estimators.end(),
                    name) == config.estimators.end()) {
        continue;
      }
      rows.push_back({estimand, name});
    }
  };
  if (config.estimand != EstimandSelection::kAtetr) {
    add_estimand(Estimand::kAte);
  }
  if (config.estimand != EstimandSelection::kAte) {
    add_estimand(Estimand::kAtetr);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "estimator filter selected nothing");
  }
  return rows;
}

}  // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
  if (config.replicates < 1) {
    throw Error(ErrorCode::kInvalidArgument, "replicates must be >= 1");
  }
  if (config.n_per_replicate < 4) {
    throw Error(ErrorCode::kInvalidArgument, "population must have n >= 4");
  }
  const std::vector<RowSpec> row_specs = plan_rows(config);

  BenchmarkReport report;
  report.config = config;
  report.truth = population_truths(config.dgp);

  const std::size_t n_rows = row_specs.size();
  const std::size_t n_replicates = static_cast<std::size_t>(config.replicates);
  // results[rep * n_rows + row]
  std::vector<std::optional<double>> results(n_replicates * n_rows);

  const auto run_replicate = [&](std::size_t replicate) {
    std::optional<ExperimentDataset> dataset;
    try {
      dataset.emplace(generate_population(config.n_per_replicate, config.dgp,
                                          replicate));
    } catch (const Error&) {
      return;  // counts as a failure for every row of this replicate
    }
    for (std::size_t row = 0; row < n_rows; ++row) {
      try {
        const EstimateResult estimate =
            run_estimator(row_specs[row].estimand, row_specs[row].estimator,
                          *dataset, config.params);
        results[replicate * n_rows + row] = estimate.estimate;
      } catch (const Error&) {
        // Dropped and counted; the row flag reports elevated failure rates.
      }
    }
  };

  unsigned workers = config.parallelism > 0
                         ? static_cast<unsigned>(config.parallelism)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, n_replicates);
  if (workers <= 1) {
    for (std::size_t replicate = 0; replicate < n_replicates; ++replicate) {
      run_replicate(replicate);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t replicate = next.fetch_add(1);
          if (replicate >= n_replicates) break;
          run_replicate(replicate);
        }
      });
    }
    for (std::thread& thread : pool) thread.join();
  }

  for (std::size_t row = 0; row < n_rows; ++row) {
    BenchmarkRow out;
    out.estimand = row_specs[row].estimand;
    out.estimator = row_specs[row].estimator;
    out.per_replicate.resize(n_replicates);
    for (std::size_t replicate = 0; replicate < n_replicates; ++replicate) {
      const auto& slot = results[replicate * n_rows + row];
      out.per_replicate[replicate] = slot;
      if (slot.has_value()) {
        out.estimates.push_back(*slot);
      } else {
        ++out.n_failed;
      }
    }
    out.n_success = static_cast<int>(out.estimates.size());
    out.flagged = out.n_failed * 100 > config.replicates;
    const double truth = out.estimand == Estimand::kAte ? report.truth.ate
                                                        : report.truth.atetr;
    if (out.n_success > 0) {
      out.stats = summarize(out.estimates, truth);
    }
    report.rows.push_back(std::move(out));
  }
  return report;
}

}  // namespace abide
