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
#include "abide/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace abide {

namespace {

using nlohmann::json;

const char* scenario_name(Scenario scenario) {
  return scenario == Scenario::kTrueConfounders ? "true" : "transformed";
}

const char* estimand_selection_name(EstimandSelection selection) {
  switch (selection) {
    case EstimandSelection::kAte: return "ate";
    case EstimandSelection::kAtetr: return "atetr";
    case EstimandSelection::kBoth: return "both";
  }
  return "both";
}

json dgp_to_json(const DgpConfig& config) {
  return json{{"rate_x1", config.rate_x1},
              {"rate_x2", config.rate_x2},
              {"sentiment_coef_x1", config.sentiment_coef_x1},
              {"sentiment_coef_x2", config.sentiment_coef_x2},
              {"response_intercept", config.response_intercept},
              {"scenario", scenario_name(config.scenario)},
              {"seed", config.seed},
              {"exact_split", config.exact_split}};
}

json truth_json(const TruthStats& truth) {
  return json{{"ate", truth.ate},
              {"atetr", truth.atetr},
              {"resp_rate_treated", truth.resp_rate_treated},
              {"resp_rate_control", truth.resp_rate_control},
              {"observed_gap", truth.observed_gap},
              {"mean_outcome", truth.mean_outcome},
              {"resp_mean_treated", truth.resp_mean_treated},
              {"resp_mean_control", truth.resp_mean_control}};
}

json config_json(const BenchmarkConfig& config) {
  return json{{"replicates", config.replicates},
              {"n_per_replicate", config.n_per_replicate},
              {"dgp", dgp_to_json(config.dgp)},
              {"estimand", estimand_selection_name(config.estimand)},
              {"estimators", config.estimators},
              {"parallelism", config.parallelism},
              {"clip", config.params.clip},
              {"atetr_ipw_hajek", config.params.atetr_ipw_hajek},
              {"ab",
               {{"learning_rate", config.params.ab.learning_rate},
                {"max_rounds", config.params.ab.max_rounds},
                {"accuracy_tolerance", config.params.ab.accuracy_tolerance}}}};
}

std::string format_scientific(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1e", value);
  return buffer;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot write '" + path.string() + "'");
  }
  out << content;
  out.flush();
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "short write to '" + path.string() + "'");
  }
}

std::string table_csv(const BenchmarkReport& report, Estimand estimand) {
  std::ostringstream out;
  out << "Estimator,Bias,MAE,MSE\n";
  out.precision(10);
  for (const BenchmarkRow& row : report.rows) {
    if (row.estimand != estimand) continue;
    out << row.estimator << ',' << row.stats.bias << ',' << row.stats.mae
        << ',' << row.stats.mse << '\n';
  }
  return out.str();
}

std::string raw_csv(const BenchmarkReport& report, Estimand estimand) {
  std::vector<const BenchmarkRow*> rows;
  for (const BenchmarkRow& row : report.rows) {
    if (row.estimand == estimand) rows.push_back(&row);
  }
  std::ostringstream out;
  out << "replicate";
  for (const BenchmarkRow* row : rows) out << ',' << row->estimator;
  out << '\n';
  out.precision(17);
  for (int replicate = 0; replicate < report.config.replicates; ++replicate) {
    out << replicate;
    for (const BenchmarkRow* row : rows) {
      out << ',';
      const auto& slot = row->per_replicate[replicate];
      if (slot.has_value()) out << *slot;
    }
    out << '\n';
  }
  return out.str();
}

bool has_estimand(const BenchmarkReport& report, Estimand estimand) {
  for (const BenchmarkRow& row : report.rows) {
    if (row.estimand == estimand) return true;
  }
  return false;
}

}  // namespace

std::string report_to_json(const BenchmarkReport& report) {
  json rows = json::array();
  for (const BenchmarkRow& row : report.rows) {
    rows.push_back(json{{"estimand", estimand_name(row.estimand)},
                        {"estimator", row.estimator},
                        {"bias", row.stats.bias},
                        {"bias_opposite", row.stats.bias_opposite},
                        {"mae", row.stats.mae},
                        {"mse", row.stats.mse},
                        {"n_success", row.n_success},
                        {"n_failed", row.n_failed},
                        {"flagged", row.flagged},
                        {"estimates", row.estimates}});
  }
  const json document{{"config", config_json(report.config)},
                      {"truth", truth_json(report.truth)},
                      {"rows", rows}};
  return document.dump(2) + "\n";
}

std::string format_report_table(const BenchmarkReport& report,
                                Estimand estimand) {
  std::ostringstream out;
  out << "Estimand: " << estimand_name(estimand) << "\n";
  out << "Estimator           Bias       MAE        MSE\n";
  for (const BenchmarkRow& row : report.rows) {
    if (row.estimand != estimand) continue;
    char line[128];
    std::snprintf(line, sizeof(line), "%-18s %9s %9s %9s%s\n",
                  row.estimator.c_str(),
                  format_scientific(row.stats.bias_opposite).c_str(),
                  format_scientific(row.stats.mae).c_str(),
                  format_scientific(row.stats.mse).c_str(),
                  row.flagged ? "  [>1% failures]" : "");
    out << line;
  }
  return out.str();
}

void write_report_files(const BenchmarkReport& report,
                        const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    throw Error(ErrorCode::kIoFailure,
                "cannot create '" + directory.string() + "': " + ec.message());
  }
  write_text_file(directory / "report.json", report_to_json(report));
  for (Estimand estimand : {Estimand::kAte, Estimand::kAtetr}) {
    if (!has_estimand(report, estimand)) continue;
    const std::string suffix = std::string(estimand_name(estimand));
    write_text_file(directory / ("table_" + suffix + ".csv"),
                    table_csv(report, estimand));
    write_text_file(directory / ("raw_" + suffix + ".csv"),
                    raw_csv(report, estimand));
  }
}

std::string truth_to_json(const TruthStats& truth) {
  return truth_json(truth).dump(2) + "\n";
}

std::string dgp_config_to_json(const DgpConfig& config, std::size_t n,
                               std::uint64_t replicate,
                               const ExperimentDataset* dataset) {
  json document{{"dgp", dgp_to_json(config)},
                {"n", n},
                {"replicate", replicate}};
  if (dataset != nullptr) {
    std::size_t arm_count[2] = {0, 0};
    std::size_t respondent_count[2] = {0, 0};
    for (const UnitRecord& record : dataset->records()) {
      const int arm = record.treatment ? 1 : 0;
      ++arm_count[arm];
      if (record.responded) ++respondent_count[arm];
    }
    document["empirical"] = {
        {"n_treated", arm_count[1]},
        {"n_control", arm_count[0]},
        {"resp_rate_treated",
         arm_count[1] > 0
             ? static_cast<double>(respondent_count[1]) / arm_count[1]
             : 0.0},
        {"resp_rate_control",
         arm_count[0] > 0
             ? static_cast<double>(respondent_count[0]) / arm_count[0]
             : 0.0}};
    document["schema"] = dataset->schema().names;
  }
  return document.dump(2) + "\n";
}

}  // namespace abide
