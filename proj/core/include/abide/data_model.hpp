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
#ifndef ABIDE_DATA_MODEL_HPP_
#define ABIDE_DATA_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "abide/errors.hpp"

namespace abide {

// One experimental unit. The outcome is structurally absent for
// non-respondents; it is stored as a real number so that weighted means and
// affine outcome recodings compose without casts, even though survey data is
// Top-2-Box binary.
struct UnitRecord {
  std::string unit_id;
  bool treatment = false;
  bool responded = false;
  std::optional<double> outcome;
  std::vector<double> covariates;

  bool operator==(const UnitRecord&) const = default;
};

struct CovariateSchema {
  std::vector<std::string> names;

  std::size_t arity() const { return names.size(); }
  bool operator==(const CovariateSchema&) const = default;
};

// A validated, immutable collection of unit records. Construction goes
// through validate(), which enforces every structural invariant the
// estimators rely on (outcome presence, covariate arity, nonempty arms,
// at least one respondent per arm).
class ExperimentDataset {
 public:
  const CovariateSchema& schema() const { return schema_; }
  const std::vector<UnitRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  friend ExperimentDataset validate(std::vector<UnitRecord> records,
                                    CovariateSchema schema);

 private:
  ExperimentDataset(std::vector<UnitRecord> records, CovariateSchema schema)
      : records_(std::move(records)), schema_(std::move(schema)) {}

  std::vector<UnitRecord> records_;
  CovariateSchema schema_;
};

// Validates raw records against a schema. Throws Error with codes
// MissingOutcome, PhantomOutcome, ArityMismatch, EmptyArm or
// NoRespondentsInArm; never silently drops records.
ExperimentDataset validate(std::vector<UnitRecord> records,
                           CovariateSchema schema);

// The four disjoint strata every estimator operates on. Their union is the
// record list.
struct Partition {
  std::vector<UnitRecord> treated_respondents;
  std::vector<UnitRecord> treated_nonrespondents;
  std::vector<UnitRecord> control_respondents;
  std::vector<UnitRecord> control_nonrespondents;

  std::size_t total() const {
    return treated_respondents.size() + treated_nonrespondents.size() +
           control_respondents.size() + control_nonrespondents.size();
  }
};

Partition partition(const ExperimentDataset& dataset);

}  // namespace abide

#endif  // ABIDE_DATA_MODEL_HPP_
