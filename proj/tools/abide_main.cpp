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
// abide: survey-outcome treatment effect estimation for randomized A/B
// tests with covariate-driven, treatment-dependent non-response.
//
// Subcommands: simulate | estimate | benchmark | truths. Every command is
// deterministic given its flags and seed; effective configuration is echoed
// into the output metadata.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abide/csv.hpp"
#include "abide/dgp.hpp"
#include "abide/errors.hpp"
#include "abide/estimators.hpp"
#include "abide/montecarlo.hpp"
#include "abide/report_io.hpp"

namespace {

using abide::Error;
using nlohmann::json;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

int exit_code_for(const Error& error) {
  return static_cast<int>(error.category());
}

// Flat option bundle shared by the subcommands. Precedence: command-line
// flag > --config JSON > ABIDE_SEED (seed only) > built-in default.
struct Options {
  std::string data_path;
  std::string estimand = "both";
  std::string estimators_csv;
  std::string scenario = "true";
  std::size_t n = 10000;
  int replicates = 500;
  std::uint64_t seed = 0;
  double clip = 0.01;
  int ab_rounds = 50;
  double ab_eta = 0.5;
  int parallelism = 0;
  bool exact_split = false;
  bool atetr_ipw_hajek = false;
  std::string out_dir;
  std::string config_path;
};

struct OptionFlags {
  CLI::Option* estimand = nullptr;
  CLI::Option* estimators = nullptr;
  CLI::Option* scenario = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* replicates = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* clip = nullptr;
  CLI::Option* ab_rounds = nullptr;
  CLI::Option* ab_eta = nullptr;
  CLI::Option* parallelism = nullptr;
  CLI::Option* exact_split = nullptr;
  CLI::Option* hajek = nullptr;
};

OptionFlags add_common_flags(CLI::App* cmd, Options& options) {
  OptionFlags flags;
  flags.estimand = cmd->add_option("--estimand", options.estimand,
                                   "Estimand: ate, atetr or both")
                       ->check(CLI::IsMember({"ate", "atetr", "both"}));
  flags.estimators = cmd->add_option(
      "--estimators", options.estimators_csv,
      "Comma-separated estimator names (default: all applicable)");
  flags.scenario = cmd->add_option("--scenario", options.scenario,
                                   "Covariate scenario: true or transformed")
                       ->check(CLI::IsMember({"true", "transformed"}));
  flags.n = cmd->add_option("--n", options.n, "Population size per dataset");
  flags.replicates =
      cmd->add_option("--replicates", options.replicates, "Replicate count");
  flags.seed = cmd->add_option("--seed", options.seed, "Master seed");
  flags.clip = cmd->add_option("--clip", options.clip,
                               "Propensity clip in (0, 0.5)");
  flags.ab_rounds = cmd->add_option("--ab-rounds", options.ab_rounds,
                                    "Adversarial balancing round cap");
  flags.ab_eta = cmd->add_option("--ab-eta", options.ab_eta,
                                 "Adversarial balancing learning rate");
  flags.parallelism = cmd->add_option("--parallelism", options.parallelism,
                                      "Worker threads (0 = all cores)");
  flags.exact_split =
      cmd->add_flag("--exact-split", options.exact_split,
                    "Assign exactly floor(n/2) units to treatment");
  flags.hajek = cmd->add_flag(
      "--atetr-ipw-hajek", options.atetr_ipw_hajek,
      "Normalize the ATETR IPW control mean by the weight sum");
  cmd->add_option("--out", options.out_dir, "Output directory");
  cmd->add_option("--config", options.config_path,
                  "JSON config file (flags take precedence)");
  return flags;
}

// Applies config-file values to options the user did not pass explicitly,
// then the ABIDE_SEED fallback.
void finish_options(const CLI::App& cmd, const OptionFlags& flags,
                    Options& options) {
  json config;
  if (!options.config_path.empty()) {
    std::ifstream in(options.config_path);
    if (!in) {
      throw Error(abide::ErrorCode::kIoFailure,
                  "cannot open config '" + options.config_path + "'");
    }
    try {
      in >> config;
    } catch (const json::exception& error) {
      throw Error(abide::ErrorCode::kInvalidArgument,
                  "config parse error: " + std::string(error.what()));
    }
  }
  const auto take = [&](CLI::Option* flag, const char* key, auto& value) {
    if (flag == nullptr || flag->count() > 0) return;
    if (config.contains(key)) {
      config.at(key).get_to(value);
    }
  };
  take(flags.estimand, "estimand", options.estimand);
  take(flags.estimators, "estimators", options.estimators_csv);
  take(flags.scenario, "scenario", options.scenario);
  take(flags.n, "n", options.n);
  take(flags.replicates, "replicates", options.replicates);
  take(flags.seed, "seed", options.seed);
  take(flags.clip, "clip", options.clip);
  take(flags.ab_rounds, "ab_rounds", options.ab_rounds);
  take(flags.ab_eta, "ab_eta", options.ab_eta);
  take(flags.parallelism, "parallelism", options.parallelism);
  take(flags.exact_split, "exact_split", options.exact_split);
  take(flags.hajek, "atetr_ipw_hajek", options.atetr_ipw_hajek);

  if ((flags.seed == nullptr || flags.seed->count() == 0) &&
      !config.contains("seed")) {
    if (const char* env_seed = std::getenv("ABIDE_SEED")) {
      options.seed = std::strtoull(env_seed, nullptr, 10);
    }
  }
}

abide::DgpConfig dgp_config_from(const Options& options) {
  abide::DgpConfig config;
  config.scenario = options.scenario == "true"
                        ? abide::Scenario::kTrueConfounders
                        : abide::Scenario::kTransformedConfounders;
  config.seed = options.seed;
  config.exact_split = options.exact_split;
  return config;
}

abide::EstimatorParams estimator_params_from(const Options& options) {
  abide::EstimatorParams params;
  params.clip = options.clip;
  params.atetr_ipw_hajek = options.atetr_ipw_hajek;
  params.ab.max_rounds = options.ab_rounds;
  params.ab.learning_rate = options.ab_eta;
  return params;
}

std::vector<std::string> parse_estimator_list(const std::string& csv) {
  std::vector<std::string> names;
  std::stringstream stream(csv);
  std::string name;
  while (std::getline(stream, name, ',')) {
    if (!name.empty()) names.push_back(name);
  }
  return names;
}

std::vector<abide::Estimand> selected_estimands(const std::string& estimand) {
  if (estimand == "ate") return {abide::Estimand::kAte};
  if (estimand == "atetr") return {abide::Estimand::kAtetr};
  return {abide::Estimand::kAte, abide::Estimand::kAtetr};
}

void ensure_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(abide::ErrorCode::kIoFailure,
                "cannot create '" + out_dir + "': " + ec.message());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw Error(abide::ErrorCode::kIoFailure,
                "cannot write '" + path.string() + "'");
  }
  out << text;
}

int cmd_truths(const Options& options) {
  const abide::TruthStats truth =
      abide::population_truths(dgp_config_from(options));
  std::printf("resp_rate_treated  %.6f\n", truth.resp_rate_treated);
  std::printf("resp_rate_control  %.6f\n", truth.resp_rate_control);
  std::printf("observed_gap       %.6f\n", truth.observed_gap);
  std::printf("mean_outcome       %.6f\n", truth.mean_outcome);
  std::printf("ate                %.1f\n", truth.ate);
  std::printf("atetr              %.1f\n", truth.atetr);
  if (!options.out_dir.empty()) {
    ensure_out_dir(options.out_dir);
    write_file(std::filesystem::path(options.out_dir) / "truths.json",
               abide::truth_to_json(truth));
  }
  return 0;
}

int cmd_simulate(const Options& options) {
  const abide::DgpConfig config = dgp_config_from(options);
  const abide::ExperimentDataset dataset =
      abide::generate_population(options.n, config);
  const std::filesystem::path out_dir =
      options.out_dir.empty() ? "." : options.out_dir;
  ensure_out_dir(out_dir.string());
  abide::write_dataset_csv(dataset, out_dir / "dataset.csv");
  write_file(out_dir / "dataset_meta.json",
             abide::dgp_config_to_json(config, options.n, 0, &dataset));
  std::printf("wrote %s and %s (n=%zu)\n",
              (out_dir / "dataset.csv").c_str(),
              (out_dir / "dataset_meta.json").c_str(), dataset.size());
  return 0;
}

int cmd_estimate(const Options& options) {
  if (options.data_path.empty()) {
    throw Error(abide::ErrorCode::kInvalidArgument, "--data is required");
  }
  const abide::ExperimentDataset dataset =
      abide::read_dataset_csv(options.data_path);
  const abide::EstimatorParams params = estimator_params_from(options);
  const std::vector<std::string> filter =
      parse_estimator_list(options.estimators_csv);

  json results = json::array();
  int successes = 0;
  std::printf("%-8s %-10s %-12s %s\n", "estimand", "estimator", "estimate",
              "notes");
  for (abide::Estimand estimand : selected_estimands(options.estimand)) {
    for (const std::string& name : abide::estimator_names(estimand)) {
      if (!filter.empty() &&
          std::find(filter.begin(), filter.end(), name) == filter.end()) {
        continue;
      }
      json row{{"estimand", abide::estimand_name(estimand)},
               {"estimator", name}};
      try {
        const abide::EstimateResult result =
            abide::run_estimator(estimand, name, dataset, params);
        ++successes;
        row["estimate"] = result.estimate;
        row["warnings"] = result.warnings;
        if (result.arm_components.has_value()) {
          row["theta1"] = result.arm_components->first;
          row["theta0"] = result.arm_components->second;
        }
        std::string notes;
        for (const std::string& warning : result.warnings) {
          notes += (notes.empty() ? "" : "; ") + warning;
        }
        std::printf("%-8s %-10s %+.6f    %s\n",
                    std::string(abide::estimand_name(estimand)).c_str(),
                    name.c_str(), result.estimate, notes.c_str());
      } catch (const Error& error) {
        row["error"] = error.what();
        std::printf("%-8s %-10s %-12s %s\n",
                    std::string(abide::estimand_name(estimand)).c_str(),
                    name.c_str(), "failed", error.what());
      }
      results.push_back(std::move(row));
    }
  }
  if (!options.out_dir.empty()) {
    ensure_out_dir(options.out_dir);
    write_file(std::filesystem::path(options.out_dir) / "estimates.json",
               results.dump(2) + "\n");
  }
  if (successes == 0) {
    throw Error(abide::ErrorCode::kSingularSystem, "every estimator failed");
  }
  return 0;
}

int cmd_benchmark(const Options& options) {
  abide::BenchmarkConfig config;
  config.replicates = options.replicates;
  config.n_per_replicate = options.n;
  config.dgp = dgp_config_from(options);
  config.params = estimator_params_from(options);
  config.estimators = parse_estimator_list(options.estimators_csv);
  config.parallelism = options.parallelism;
  if (options.estimand == "ate") {
    config.estimand = abide::EstimandSelection::kAte;
  } else if (options.estimand == "atetr") {
    config.estimand = abide::EstimandSelection::kAtetr;
  } else {
    config.estimand = abide::EstimandSelection::kBoth;
  }

  const abide::BenchmarkReport report = abide::run_benchmark(config);
  for (abide::Estimand estimand :
       {abide::Estimand::kAte, abide::Estimand::kAtetr}) {
    const std::string table = abide::format_report_table(report, estimand);
    if (table.find('\n') != table.rfind('\n')) {  // more than the header line
      std::fputs(table.c_str(), stdout);
      std::fputc('\n', stdout);
    }
  }
  if (!options.out_dir.empty()) {
    abide::write_report_files(report, options.out_dir);
    std::printf("report written to %s\n", options.out_dir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Treatment-effect estimation for survey outcomes in randomized "
      "A/B tests with treatment-dependent non-response"};
  app.require_subcommand(1);

  Options options;

  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate a synthetic dataset CSV");
  OptionFlags simulate_flags = add_common_flags(simulate, options);

  CLI::App* estimate =
      app.add_subcommand("estimate", "Run estimators on a dataset CSV");
  estimate->add_option("--data", options.data_path, "Input dataset CSV");
  OptionFlags estimate_flags = add_common_flags(estimate, options);

  CLI::App* benchmark =
      app.add_subcommand("benchmark", "Run the Monte Carlo benchmark");
  OptionFlags benchmark_flags = add_common_flags(benchmark, options);

  CLI::App* truths =
      app.add_subcommand("truths", "Print population-level truth statistics");
  OptionFlags truths_flags = add_common_flags(truths, options);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      finish_options(*simulate, simulate_flags, options);
      return cmd_simulate(options);
    }
    if (estimate->parsed()) {
      finish_options(*estimate, estimate_flags, options);
      return cmd_estimate(options);
    }
    if (benchmark->parsed()) {
      finish_options(*benchmark, benchmark_flags, options);
      return cmd_benchmark(options);
    }
    finish_options(*truths, truths_flags, options);
    return cmd_truths(options);
  } catch (const Error& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return exit_code_for(error);
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return kExitNumerical;
  }
}
