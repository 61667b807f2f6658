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
#ifndef ABIDE_CSV_HPP_
#define ABIDE_CSV_HPP_

#include <filesystem>
#include <iosfwd>

#include "abide/data_model.hpp"

namespace abide {

// Canonical dataset format:
//   unit_id,treatment,responded,outcome,<covariate names...>
// treatment/responded are 0/1, outcome is empty exactly when responded=0,
// covariates are decimal literals. LF and CRLF line endings both accepted.
// Errors cite 1-based physical line numbers.
ExperimentDataset read_dataset_csv(std::istream& input);
ExperimentDataset read_dataset_csv(const std::filesystem::path& path);

void write_dataset_csv(const ExperimentDataset& dataset, std::ostream& output);
void write_dataset_csv(const ExperimentDataset& dataset,
                       const std::filesystem::path& path);

}  // namespace abide

#endif  // ABIDE_CSV_HPP_
