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
#include "abide/data_model.hpp"

#include <unordered_set>

namespace abide {

ExperimentDataset validate(std::vector<UnitRecord> records,
                           CovariateSchema schema) {
  if (records.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no records supplied");
  }
  if (schema.arity() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "schema must name >= 1 covariate");
  }
  std::unordered_set<std::string> seen_names(schema.names.begin(),
                                             schema.names.end());
  if (seen_names.size() != schema.names.size()) {
    throw Error(ErrorCode::kInvalidArgument, "covariate names must be unique");
  }

  bool arm_present[2] = {false, false};
  bool arm_responded[2] = {false, false};
  for (const UnitRecord& record : records) {
    if (record.responded && !record.outcome.has_value()) {
      throw Error(ErrorCode::kMissingOutcome,
                  "unit '" + record.unit_id + "' responded without an outcome");
    }
    if (!record.responded && record.outcome.has_value()) {
      throw Error(ErrorCode::kPhantomOutcome,
                  "unit '" + record.unit_id +
                      "' carries an outcome but did not respond");
    }
    if (record.covariates.size() != schema.arity()) {
      throw Error(ErrorCode::kArityMismatch,
                  "unit '" + record.unit_id + "' has " +
                      std::to_string(record.covariates.size()) +
                      " covariates, schema expects " +
                      std::to_string(schema.arity()));
    }
    arm_present[record.treatment ? 1 : 0] = true;
    if (record.responded) arm_responded[record.treatment ? 1 : 0] = true;
  }
  for (int arm : {1, 0}) {
    if (!arm_present[arm]) {
      throw Error(ErrorCode::kEmptyArm, std::string("no records with T=") +
                                            std::to_string(arm));
    }
    if (!arm_responded[arm]) {
      throw Error(ErrorCode::kNoRespondentsInArm,
                  std::string("no respondents with T=") + std::to_string(arm));
    }
  }
  return ExperimentDataset(std::move(records), std::move(schema));
}

Partition partition(const ExperimentDataset& dataset) {
  Partition strata;
  for (const UnitRecord& record : dataset.records()) {
    if (record.treatment) {
      (record.responded ? strata.treated_respondents
                        : strata.treated_nonrespondents)
          .push_back(record);
    } else {
      (record.responded ? strata.control_respondents
                        : strata.control_nonrespondents)
          .push_back(record);
    }
  }
  return strata;
}

}  // namespace abide
