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
#ifndef ABIDE_REPORT_IO_HPP_
#define ABIDE_REPORT_IO_HPP_

#include <filesystem>
#include <string>

#include "abide/montecarlo.hpp"

namespace abide {

// JSON document carrying the effective config, the truth statistics and
// every row (both bias orientations, MAE, MSE, failure counts, raw
// estimates).
std::string report_to_json(const BenchmarkReport& report);

// Study-style text table for one estimand: Estimator | Bias | MAE | MSE.
std::string format_report_table(const BenchmarkReport& report,
                                Estimand estimand);

// Writes report.json, table_<estimand>.csv and raw_<estimand>.csv into
// `directory` (created if absent). Raw CSVs are replicate-aligned with empty
// cells for failures, ready for external boxplot tooling.
void write_report_files(const BenchmarkReport& report,
                        const std::filesystem::path& directory);

std::string truth_to_json(const TruthStats& truth);
std::string dgp_config_to_json(const DgpConfig& config, std::size_t n,
                               std::uint64_t replicate,
                               const ExperimentDataset* dataset);

}  // namespace abide

#endif  // ABIDE_REPORT_IO_HPP_
