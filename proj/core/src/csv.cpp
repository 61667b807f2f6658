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
#include "abide/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace abide {

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& text, std::size_t line_number,
                    const char* what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("line ") + std::to_string(line_number) +
                    ": cannot parse " + what + " '" + text + "'");
  }
  return value;
}

bool parse_flag(const std::string& text, std::size_t line_number,
                const char* what) {
  if (text == "0") return false;
  if (text == "1") return true;
  throw Error(ErrorCode::kInvalidArgument,
              std::string("line ") + std::to_string(line_number) + ": " +
                  what + " must be 0 or 1, got '" + text + "'");
}

void strip_trailing_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

ExperimentDataset read_dataset_csv(std::istream& input) {
  std::string line;
  if (!std::getline(input, line)) {
    throw Error(ErrorCode::kInvalidArgument, "empty input, header required");
  }
  strip_trailing_cr(line);
  const std::vector<std::string> header = split_line(line);
  if (header.size() < 5 || header[0] != "unit_id" || header[1] != "treatment" ||
      header[2] != "responded" || header[3] != "outcome") {
    throw Error(ErrorCode::kInvalidArgument,
                "line 1: header must start with "
                "unit_id,treatment,responded,outcome and name >= 1 covariate");
  }
  CovariateSchema schema;
  schema.names.assign(header.begin() + 4, header.end());

  std::vector<UnitRecord> records;
  std::size_t line_number = 1;
  while (std::getline(input, line)) {
    ++line_number;
    strip_trailing_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kArityMismatch,
                  "line " + std::to_string(line_number) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    UnitRecord record;
    record.unit_id = fields[0];
    record.treatment = parse_flag(fields[1], line_number, "treatment");
    record.responded = parse_flag(fields[2], line_number, "responded");
    if (record.responded) {
      if (fields[3].empty()) {
        throw Error(ErrorCode::kMissingOutcome,
                    "line " + std::to_string(line_number) +
                        ": responded=1 but outcome is empty");
      }
      record.outcome = parse_double(fields[3], line_number, "outcome");
    } else if (!fields[3].empty()) {
      throw Error(ErrorCode::kPhantomOutcome,
                  "line " + std::to_string(line_number) +
                      ": responded=0 but outcome is present");
    }
    record.covariates.reserve(schema.arity());
    for (std::size_t i = 4; i < fields.size(); ++i) {
      record.covariates.push_back(
          parse_double(fields[i], line_number, "covariate"));
    }
    records.push_back(std::move(record));
  }
  return validate(std::move(records), std::move(schema));
}

ExperimentDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) {
    throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");
  }
  return read_dataset_csv(input);
}

void write_dataset_csv(const ExperimentDataset& dataset,
                       std::ostream& output) {
  output << "unit_id,treatment,responded,outcome";
  for (const std::string& name : dataset.schema().names) {
    output << ',' << name;
  }
  output << '\n';
  for (const UnitRecord& record : dataset.records()) {
    output << record.unit_id << ',' << (record.treatment ? 1 : 0) << ','
           << (record.responded ? 1 : 0) << ',';
    if (record.outcome.has_value()) output << format_double(*record.outcome);
    for (double covariate : record.covariates) {
      output << ',' << format_double(covariate);
    }
    output << '\n';
  }
}

void write_dataset_csv(const ExperimentDataset& dataset,
                       const std::filesystem::path& path) {
  std::ofstream output(path);
  if (!output) {
    throw Error(ErrorCode::kIoFailure, "cannot write '" + path.string() + "'");
  }
  write_dataset_csv(dataset, output);
  output.flush();
  if (!output) {
    throw Error(ErrorCode::kIoFailure, "short write to '" + path.string() + "'");
  }
}

}  // namespace abide
