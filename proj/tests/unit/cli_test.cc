// Copyright 2026 The dexsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult RunCli(const std::string& args) {
  const std::string cmd = std::string(DEXSIM_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dexsim_cli_test_" +
            std::string(
                ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string WriteConfig(const std::string& text) {
    const fs::path p = dir_ / "config.json";
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

constexpr char kTinyConfig[] = R"({
  "train": {"batches": 1, "transitions_per_batch": 100, "env_slots": 2,
            "eval_episodes": 1},
  "network": {"dense_size": 8, "lstm_size": 4},
  "calibration": {"parameters": ["joint.0.damping"], "max_passes": 2}
})";

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(RunCli("").code, 2);
  EXPECT_EQ(RunCli("fly").code, 2);
  EXPECT_EQ(RunCli("randcheck --config /nonexistent/config.json").code, 2);
  EXPECT_EQ(RunCli("randcheck --samples 0").code, 2);
  EXPECT_EQ(RunCli("randcheck --disable-layer gravity").code, 2);
  const RunResult bad = RunCli("randcheck --config " + WriteConfig(R"({"sede": 1})"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.output.find("sede"), std::string::npos) << bad.output;
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(RunCli("--help").code, 0); }

TEST_F(CliTest, RandcheckPassesAndFails) {
  const RunResult ok = RunCli("randcheck --samples 50000");
  EXPECT_EQ(ok.code, 0) << ok.output;
  EXPECT_NE(ok.output.find("PASS obs.fingertip_uncorrelated_std"),
            std::string::npos);
  const RunResult skipped =
      RunCli("randcheck --samples 5000 --disable-layer random_force");
  EXPECT_NE(skipped.output.find("SKIP force.std_over_mass"), std::string::npos);
  const std::string doubled = WriteConfig(
      R"({"randomization": {"observation_noise": {"fingertip_uncorrelated": 0.004}}})");
  const RunResult fail = RunCli("randcheck --samples 20000 --config " + doubled);
  EXPECT_EQ(fail.code, 3) << fail.output;
  EXPECT_NE(fail.output.find("FAIL obs.fingertip_uncorrelated_std"),
            std::string::npos)
      << fail.output;
}

TEST_F(CliTest, TrainRecordsProvenanceAndEvalLoads) {
  const std::string cfg = WriteConfig(kTinyConfig);
  const std::string out = (dir_ / "run").string();
  const RunResult train =
      RunCli("train --config " + cfg + " --seed 9 --out " + out);
  ASSERT_EQ(train.code, 0) << train.output;
  const std::string resolved = ReadFile(fs::path(out) / "resolved_config.json");
  EXPECT_NE(resolved.find("\"seed\": \"cli\""), std::string::npos) << resolved;
  EXPECT_NE(resolved.find("\"train.batches\": \"file\""), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(out) / "checkpoint.bin"));
  EXPECT_TRUE(fs::exists(fs::path(out) / "metrics.jsonl"));

  const RunResult eval = RunCli("eval --config " + cfg + " --seed 9 --out " + out +
                             " --episodes 2");
  EXPECT_EQ(eval.code, 0) << eval.output;
  EXPECT_NE(eval.output.find("episodes 2"), std::string::npos);
  // A checkpoint written under another seed is refused.
  EXPECT_EQ(RunCli("eval --config " + cfg + " --seed 10 --out " + out).code, 2);
}

TEST_F(CliTest, CalibrateFromTruthWritesReport) {
  const std::string cfg = WriteConfig(kTinyConfig);
  const RunResult r = RunCli("calibrate --self-generate --from-truth --config " +
                          cfg + " --out " + dir_.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("0 accepted steps"), std::string::npos) << r.output;
  EXPECT_TRUE(fs::exists(dir_ / "calibration_report.json"));
  EXPECT_EQ(RunCli("calibrate --config " + cfg).code, 2);
}

}  // namespace
