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

// Command-line entry point: train, calibrate, randcheck and eval.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dexsim/common/errors.h"
#include "dexsim/common/text_format.h"
#include "dexsim/config/randcheck.h"
#include "dexsim/config/run_config.h"
#include "dexsim/sysid/calibration.h"
#include "dexsim/train/trainer.h"

namespace {

using dexsim::config::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;
constexpr int kExitRuntime = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::vector<std::string> disabled_layers;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON run configuration");
  cmd->add_option("--seed", flags.seed, "Master seed override");
  cmd->add_option("--workers", flags.workers, "Rollout/replay threads");
  cmd->add_option("--out", flags.out, "Output directory override");
  cmd->add_option("--disable-layer", flags.disabled_layers,
                  "Randomization layer to switch off (repeatable)");
}

RunConfig ResolveConfig(const CommonFlags& flags) {
  RunConfig cfg = flags.config_path.empty()
                      ? dexsim::config::ParseRunConfig("{}")
                      : dexsim::config::LoadRunConfig(flags.config_path);
  if (flags.seed) dexsim::config::OverrideSeed(cfg, *flags.seed);
  if (flags.workers) dexsim::config::OverrideWorkers(cfg, *flags.workers);
  if (flags.out) dexsim::config::OverrideOutputDir(cfg, *flags.out);
  for (const auto& layer : flags.disabled_layers) {
    dexsim::config::DisableLayer(cfg, layer);
  }
  cfg.train.Validate();
  return cfg;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw dexsim::ConfigError("cannot write " + path.string());
  f << text;
}

int Train(const CommonFlags& flags, bool resume) {
  const RunConfig cfg = ResolveConfig(flags);
  std::filesystem::create_directories(cfg.output_dir);
  WriteText(std::filesystem::path(cfg.output_dir) / "resolved_config.json",
            dexsim::config::ResolvedConfigJson(cfg));
  const dexsim::train::TrainSummary summary = dexsim::train::RunTraining(
      cfg.train, cfg.output_dir, resume, dexsim::config::ConfigFingerprint(cfg),
      &std::cout);
  std::cout << "trained " << summary.batches << " batches; median goals "
            << dexsim::FormatDouble(summary.final_eval.median_goals) << "\n";
  return kExitOk;
}

dexsim::env::EnvParams Perturbed(
    const dexsim::env::EnvParams& truth,
    const std::vector<std::pair<std::string, double>>& perturbation) {
  dexsim::env::EnvParams p = truth;
  for (const auto& [path, factor] : perturbation) {
    for (auto& ref : dexsim::env::ResolveParamPath(p, path)) {
      *ref.value *= factor;
    }
  }
  p.Validate();
  return p;
}

int Calibrate(const CommonFlags& flags, bool self_generate, bool from_truth,
              const std::vector<std::string>& trajectory_paths) {
  const RunConfig cfg = ResolveConfig(flags);
  if (self_generate == !trajectory_paths.empty()) {
    throw dexsim::ConfigError(
        "calibrate needs either --self-generate or trajectory files");
  }
  std::vector<dexsim::sysid::RecordedTrajectory> trajectories;
  dexsim::env::EnvParams start = cfg.train.env;
  if (self_generate) {
    // The configured environment plays the hidden ground truth.
    trajectories = dexsim::sysid::GenerateCalibrationTrajectories(
        cfg.train.env, cfg.calibration.trajectory_seed);
    if (!from_truth) start = Perturbed(cfg.train.env, cfg.calibration.perturbation);
  } else {
    for (const auto& path : trajectory_paths) {
      trajectories.push_back({path, dexsim::env::LoadTrajectory(path)});
    }
  }
  dexsim::sysid::DescentOptions options;
  options.max_passes = cfg.calibration.max_passes;
  options.workers = cfg.train.workers;
  const dexsim::sysid::DescentResult result = dexsim::sysid::CoordinateDescent(
      start, trajectories, cfg.calibration.parameters, options);

  std::filesystem::create_directories(cfg.output_dir);
  const auto report =
      std::filesystem::path(cfg.output_dir) / "calibration_report.json";
  WriteText(report, dexsim::sysid::FormatReport(start, result));
  const double reduction =
      result.start_objective > 0.0
          ? 1.0 - result.final_objective / result.start_objective
          : 0.0;
  std::cout << "replay error " << dexsim::FormatDouble(result.start_objective)
            << " -> " << dexsim::FormatDouble(result.final_objective)
            << " (reduction " << dexsim::FormatDouble(100.0 * reduction)
            << "%), " << result.steps.size() << " accepted steps in "
            << result.passes << " passes\nreport: " << report.string() << "\n";
  return kExitOk;
}

int Randcheck(const CommonFlags& flags, std::optional<int> samples) {
  const RunConfig cfg = ResolveConfig(flags);
  const int n = samples ? *samples : cfg.randcheck.samples;
  const auto results = dexsim::config::RunRandcheck(
      cfg.train.randomization, cfg.train.env, n, cfg.train.seed);
  for (const auto& r : results) {
    std::cout << dexsim::config::FormatCheck(r) << "\n";
  }
  const bool ok = dexsim::config::AllPassed(results);
  std::cout << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? kExitOk : kExitCheck;
}

int Eval(const CommonFlags& flags, const std::string& checkpoint,
         std::optional<int> episodes) {
  const RunConfig cfg = ResolveConfig(flags);
  const std::string path =
      checkpoint.empty()
          ? (std::filesystem::path(cfg.output_dir) / "checkpoint.bin").string()
          : checkpoint;
  dexsim::train::Trainer trainer(cfg.train,
                                 dexsim::config::ConfigFingerprint(cfg));
  trainer.LoadCheckpoint(path);
  const auto result = trainer.EvaluatePolicy(
      episodes ? *episodes : cfg.train.eval_episodes, /*tag=*/0xe7a1);
  std::vector<double> goals(result.consecutive_goals.begin(),
                            result.consecutive_goals.end());
  std::cout << "episodes " << goals.size() << "\nconsecutive goals "
            << dexsim::FormatArray(goals) << "\nmedian "
            << dexsim::FormatDouble(result.median_goals) << "\ndrops "
            << result.drops << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dexsim: in-hand reorientation toy stack"};
  app.require_subcommand(1);

  CommonFlags flags;
  bool resume = false;
  auto* train = app.add_subcommand("train", "Train a policy");
  AddCommonFlags(train, flags);
  train->add_flag("--resume", resume, "Continue from the output checkpoint");

  bool self_generate = false;
  bool from_truth = false;
  std::vector<std::string> trajectories;
  auto* calibrate =
      app.add_subcommand("calibrate", "Fit simulator parameters to recordings");
  AddCommonFlags(calibrate, flags);
  calibrate->add_flag("--self-generate", self_generate,
                      "Record scripted trajectories from the configured "
                      "parameters and start from a perturbed copy");
  calibrate->add_flag("--from-truth", from_truth,
                      "With --self-generate, start at the true parameters");
  calibrate->add_option("trajectories", trajectories, "Trajectory files");

  std::optional<int> samples;
  auto* randcheck =
      app.add_subcommand("randcheck", "Monte-Carlo checks of randomizations");
  AddCommonFlags(randcheck, flags);
  randcheck->add_option("--samples", samples, "Samples per check");

  std::string checkpoint;
  std::optional<int> episodes;
  auto* eval = app.add_subcommand("eval", "Roll out a checkpoint");
  AddCommonFlags(eval, flags);
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file");
  eval->add_option("--episodes", episodes, "Evaluation episodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (train->parsed()) return Train(flags, resume);
    if (calibrate->parsed()) {
      return Calibrate(flags, self_generate, from_truth, trajectories);
    }
    if (randcheck->parsed()) return Randcheck(flags, samples);
    if (eval->parsed()) return Eval(flags, checkpoint, episodes);
  } catch (const dexsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
