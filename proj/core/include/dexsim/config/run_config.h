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

#ifndef DEXSIM_CONFIG_RUN_CONFIG_H_
#define DEXSIM_CONFIG_RUN_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dexsim/train/trainer.h"

namespace dexsim::config {

struct CalibrationConfig {
  // Hidden ground truth for self-generated recordings: path -> factor.
  std::vector<std::pair<std::string, double>> perturbation = {
      {"joint.0.damping", 2.0},  {"joint.1.stiffness", 0.5},
      {"actuator.2.gain", 1.6},  {"joint.3.damping", 0.6},
      {"actuator.4.gain", 0.7}};
  std::vector<std::string> parameters = {
      "joint.*.damping", "joint.*.stiffness", "joint.*.friction",
      "joint.*.equilibrium", "actuator.*.gain"};
  std::uint64_t trajectory_seed = 7;
  int max_passes = 50;
};

struct RandcheckConfig {
  int samples = 200000;
};

struct RunConfig {
  train::TrainConfig train;
  std::string output_dir = "runs/dexsim";
  CalibrationConfig calibration;
  RandcheckConfig randcheck;
  // Dotted key -> "file" or "cli" for every value not left at its default.
  std::map<std::string, std::string> provenance;
};

// Strict parse: unknown keys and type mismatches raise ConfigError naming
// the offending key path.
RunConfig ParseRunConfig(const std::string& json_text,
                         const std::string& source = "<config>");
RunConfig LoadRunConfig(const std::string& path);

void OverrideSeed(RunConfig& config, std::uint64_t seed);
void OverrideWorkers(RunConfig& config, int workers);
void OverrideOutputDir(RunConfig& config, const std::string& dir);
void DisableLayer(RunConfig& config, const std::string& layer);

// Every value materialized, plus the provenance map. Parsing the snapshot
// yields an identical configuration.
std::string ResolvedConfigJson(const RunConfig& config);

// Canonical text of everything that influences training results (omits the
// output directory, worker count and provenance).
std::string ConfigFingerprint(const RunConfig& config);

}  // namespace dexsim::config

#endif  // DEXSIM_CONFIG_RUN_CONFIG_H_
