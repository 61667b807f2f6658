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
// End-to-end checks of the abide binary: exit codes, file outputs and
// determinism. The binary path arrives via the ABIDE_CLI environment
// variable set by CTest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

const char* cli_path() {
  const char* path = std::getenv("ABIDE_CLI");
  return path != nullptr ? path : "abide";
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    const fs::path path = fs::temp_directory_path() / "abide_cli_tests";
    fs::remove_all(path);
    fs::create_directories(path);
    return path;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path out_file = scratch_dir() / ("out" + std::to_string(counter));
  const fs::path err_file = scratch_dir() / ("err" + std::to_string(counter));
  ++counter;
  const std::string command = env + (env.empty() ? "" : " ") +
                              std::string(cli_path()) + " " + args + " >" +
                              out_file.string() + " 2>" + err_file.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

TEST(CliTruths, PrintsStudyStatistics) {
  const RunResult result = run_cli("truths");
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_NE(result.out.find("resp_rate_treated"), std::string::npos);
  EXPECT_NE(result.out.find("0.15"), std::string::npos);
  EXPECT_NE(result.out.find("ate"), std::string::npos);
}

TEST(CliSimulate, DeterministicForFixedSeed) {
  const fs::path dir_a = scratch_dir() / "sim_a";
  const fs::path dir_b = scratch_dir() / "sim_b";
  ASSERT_EQ(run_cli("simulate --n 2000 --seed 7 --out " + dir_a.string())
                .exit_code,
            0);
  ASSERT_EQ(run_cli("simulate --n 2000 --seed 7 --out " + dir_b.string())
                .exit_code,
            0);
  EXPECT_EQ(slurp(dir_a / "dataset.csv"), slurp(dir_b / "dataset.csv"));
  EXPECT_EQ(slurp(dir_a / "dataset_meta.json"),
            slurp(dir_b / "dataset_meta.json"));
  EXPECT_NE(slurp(dir_a / "dataset.csv"), "");
}

TEST(CliSimulate, TransformedScenarioEmitsZColumns) {
  const fs::path dir = scratch_dir() / "sim_z";
  ASSERT_EQ(run_cli("simulate --n 500 --seed 3 --scenario transformed --out " +
                    dir.string())
                .exit_code,
            0);
  std::ifstream csv(dir / "dataset.csv");
  std::string header;
  ASSERT_TRUE(std::getline(csv, header));
  EXPECT_EQ(header, "unit_id,treatment,responded,outcome,z1,z2");
  std::string line;
  while (std::getline(csv, line)) {
    // z1 is the fifth field and must exceed 1.
    std::stringstream fields(line);
    std::string field;
    for (int i = 0; i < 5; ++i) std::getline(fields, field, ',');
    EXPECT_GT(std::stod(field), 1.0);
  }
  const std::string meta = slurp(dir / "dataset_meta.json");
  EXPECT_NE(meta.find("\"transformed\""), std::string::npos);
  EXPECT_NE(meta.find("resp_rate_treated"), std::string::npos);
}

TEST(CliEstimate, NaiveMatchesHandComputation) {
  const fs::path csv = scratch_dir() / "hand.csv";
  write_file(csv,
             "unit_id,treatment,responded,outcome,x\n"
             "t1,1,1,1,0.1\n"
             "t2,1,1,1,0.7\n"
             "t3,1,1,0,0.4\n"
             "c1,0,1,0,0.2\n"
             "c2,0,1,0,0.6\n"
             "c3,0,0,,0.8\n");
  const fs::path out = scratch_dir() / "est_out";
  const RunResult result =
      run_cli("estimate --data " + csv.string() +
              " --estimand ate --estimators naive --out " + out.string());
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_NE(result.out.find("0.666667"), std::string::npos) << result.out;
  const std::string json_text = slurp(out / "estimates.json");
  EXPECT_NE(json_text.find("\"estimator\": \"naive\""), std::string::npos);
}

TEST(CliEstimate, ValidationFailureCitesLineAndExitsOne) {
  const fs::path csv = scratch_dir() / "bad.csv";
  write_file(csv,
             "unit_id,treatment,responded,outcome,x\n"
             "t1,1,1,1,0.1\n"
             "c1,0,1,0,0.2\n"
             "c2,0,0,1,0.6\n");
  const RunResult result = run_cli("estimate --data " + csv.string());
  EXPECT_EQ(result.exit_code, 1);
  EXPECT_NE(result.err.find("line 4"), std::string::npos) << result.err;
}

TEST(CliEstimate, MissingFileExitsThree) {
  const RunResult result =
      run_cli("estimate --data /nonexistent/nowhere.csv");
  EXPECT_EQ(result.exit_code, 3);
}

TEST(CliEstimate, NumericalFailureExitsTwo) {
  // The only requested estimator needs entropy balancing toward a target
  // outside the control respondents' convex hull.
  const fs::path csv = scratch_dir() / "infeasible.csv";
  write_file(csv,
             "unit_id,treatment,responded,outcome,x\n"
             "t1,1,1,1,5.0\n"
             "c1,0,1,0,0.0\n"
             "c2,0,1,1,1.0\n");
  const RunResult result =
      run_cli("estimate --data " + csv.string() +
              " --estimand atetr --estimators eb");
  EXPECT_EQ(result.exit_code, 2) << result.err;
  EXPECT_NE(result.out.find("failed"), std::string::npos);
}

TEST(CliEstimate, OrTracksTruthOnGeneratedData) {
  const fs::path dir = scratch_dir() / "sim_large";
  ASSERT_EQ(
      run_cli("simulate --n 100000 --seed 31 --out " + dir.string()).exit_code,
      0);
  const fs::path out = scratch_dir() / "est_large";
  const RunResult result =
      run_cli("estimate --data " + (dir / "dataset.csv").string() +
              " --estimand ate --estimators or --out " + out.string());
  ASSERT_EQ(result.exit_code, 0) << result.err;
  // True ATE is zero; the outcome-regression estimate must sit within 0.02.
  const std::string json_text = slurp(out / "estimates.json");
  const auto pos = json_text.find("\"estimate\":");
  ASSERT_NE(pos, std::string::npos);
  const double estimate = std::stod(json_text.substr(pos + 11));
  EXPECT_LT(std::abs(estimate), 0.02);
}

TEST(CliBenchmark, WritesReportBundle) {
  const fs::path out = scratch_dir() / "bench_out";
  const RunResult result = run_cli(
      "benchmark --replicates 4 --n 600 --seed 5 --estimators naive,cc "
      "--estimand atetr --out " +
      out.string());
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_NE(result.out.find("Estimator"), std::string::npos);
  EXPECT_NE(result.out.find("naive"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "report.json"));
  EXPECT_TRUE(fs::exists(out / "table_atetr.csv"));
  EXPECT_TRUE(fs::exists(out / "raw_atetr.csv"));
  EXPECT_FALSE(fs::exists(out / "table_ate.csv"));

  const std::string table = slurp(out / "table_atetr.csv");
  EXPECT_NE(table.find("Estimator,Bias,MAE,MSE"), std::string::npos);
  EXPECT_NE(table.find("naive,"), std::string::npos);
  EXPECT_NE(table.find("cc,"), std::string::npos);
}

TEST(CliBenchmark, DeterministicReportBytes) {
  const fs::path out_a = scratch_dir() / "bench_a";
  const fs::path out_b = scratch_dir() / "bench_b";
  const std::string flags =
      "benchmark --replicates 3 --n 500 --seed 11 --estimators naive "
      "--estimand ate --out ";
  ASSERT_EQ(run_cli(flags + out_a.string()).exit_code, 0);
  ASSERT_EQ(run_cli(flags + out_b.string()).exit_code, 0);
  EXPECT_EQ(slurp(out_a / "report.json"), slurp(out_b / "report.json"));
  EXPECT_EQ(slurp(out_a / "raw_ate.csv"), slurp(out_b / "raw_ate.csv"));
}

TEST(CliConfig, FlagsOverrideConfigFileOverridesDefaults) {
  const fs::path config = scratch_dir() / "config.json";
  write_file(config, "{\"seed\": 5, \"n\": 300}\n");
  const fs::path from_config = scratch_dir() / "cfg_a";
  const fs::path from_flags = scratch_dir() / "cfg_b";
  // --n on the command line beats the config file; seed comes from config.
  ASSERT_EQ(run_cli("simulate --config " + config.string() + " --n 400 --out " +
                    from_config.string())
                .exit_code,
            0);
  ASSERT_EQ(run_cli("simulate --seed 5 --n 400 --out " + from_flags.string())
                .exit_code,
            0);
  EXPECT_EQ(slurp(from_config / "dataset.csv"),
            slurp(from_flags / "dataset.csv"));
}

TEST(CliConfig, EnvSeedIsFallbackOnly) {
  const fs::path env_dir = scratch_dir() / "env_a";
  const fs::path flag_dir = scratch_dir() / "env_b";
  ASSERT_EQ(run_cli("simulate --n 250 --out " + env_dir.string(),
                    "ABIDE_SEED=9")
                .exit_code,
            0);
  ASSERT_EQ(run_cli("simulate --n 250 --seed 9 --out " + flag_dir.string())
                .exit_code,
            0);
  EXPECT_EQ(slurp(env_dir / "dataset.csv"), slurp(flag_dir / "dataset.csv"));

  // An explicit flag beats the environment.
  const fs::path override_dir = scratch_dir() / "env_c";
  ASSERT_EQ(run_cli("simulate --n 250 --seed 4 --out " + override_dir.string(),
                    "ABIDE_SEED=9")
                .exit_code,
            0);
  EXPECT_NE(slurp(override_dir / "dataset.csv"),
            slurp(flag_dir / "dataset.csv"));
}

TEST(CliRoundTrip, SimulateThenEstimate) {
  const fs::path dir = scratch_dir() / "roundtrip";
  ASSERT_EQ(
      run_cli("simulate --n 4000 --seed 13 --out " + dir.string()).exit_code,
      0);
  const RunResult result =
      run_cli("estimate --data " + (dir / "dataset.csv").string() +
              " --estimand both");
  ASSERT_EQ(result.exit_code, 0) << result.err;
  // Every estimator of both families appears in the table.
  for (const char* name : {"naive", "or", "ipw", "dr", "cc", "eb", "ab"}) {
    EXPECT_NE(result.out.find(name), std::string::npos) << name;
  }
}

}  // namespace
