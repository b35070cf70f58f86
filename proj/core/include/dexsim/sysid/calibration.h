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

#ifndef DEXSIM_SYSID_CALIBRATION_H_
#define DEXSIM_SYSID_CALIBRATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dexsim/env/env_params.h"
#include "dexsim/env/toy_env.h"
#include "dexsim/env/trajectory_io.h"

namespace dexsim::sysid {

// 13 steps of 80 ms: the shortest whole-step window of at least 1 s.
inline constexpr int kSegmentSteps = 13;
inline constexpr double kBlowupPenalty = 1e6;
inline constexpr double kAcceptThreshold = 1e-3;  // relative improvement
inline constexpr double kStopVelocity = 1e-3;     // rad/s
inline constexpr double kStopDuration = 0.5;      // s
inline constexpr double kMaxSweepDuration = 6.0;  // s per direction

// The "robot": toy dynamics behind the deterministic backlash model, with
// nominal 8 ms substeps and no other randomization.
class Plant {
 public:
  Plant(const env::EnvParams& params, const env::EnvState& state,
        const env::JointVector& slack = env::JointVector::Zero());

  void Step(const env::Bins& bins, const env::Substeps& substeps);

  const env::EnvState& state() const { return state_; }
  const env::JointVector& slack() const { return slack_; }
  const env::EnvParams& params() const { return params_; }

 private:
  env::EnvParams params_;
  env::EnvState state_;
  env::JointVector slack_;
};

struct RecordedTrajectory {
  std::string name;
  // Records every step; snapshots before steps 0, 13, 26, ...
  env::TrajectoryFile file;
};

enum class ScriptKind { kLimitSweep, kOscillation };

struct ScriptOptions {
  std::vector<double> frequencies = {0.25, 0.5, 1.0};  // Hz
  double oscillation_amplitude = 0.4;                  // rad
  double seconds_per_frequency = 8.0;
};

// Records one scripted trajectory for `joint`; other joints receive the
// zero-action bin.
RecordedTrajectory RecordScript(const env::EnvParams& params,
                                const env::EnvState& start, int joint,
                                ScriptKind kind,
                                const ScriptOptions& options = {});

// Limit sweep and oscillation for every finger, each starting from a reset
// of the environment seeded with `seed`.
std::vector<RecordedTrajectory> GenerateCalibrationTrajectories(
    const env::EnvParams& params, std::uint64_t seed,
    const ScriptOptions& options = {});

struct ReplayError {
  double error = 0.0;  // mean squared joint-angle error, rad^2
  int segments = 0;
  int blowups = 0;
};

// Every complete 13-step segment is replayed open loop from its snapshot.
ReplayError ComputeReplayError(const env::EnvParams& candidate,
                               const RecordedTrajectory& trajectory);
ReplayError ComputeReplayError(
    const env::EnvParams& candidate,
    const std::vector<RecordedTrajectory>& trajectories, int workers = 1);

struct DescentOptions {
  std::vector<double> factors = {0.5, 0.8, 0.95, 1.05, 1.25, 2.0};
  std::vector<double> offsets = {-0.2, -0.05, 0.05, 0.2};  // x unit scale
  int max_passes = 50;
  int max_steps_per_parameter = 20;
  int workers = 1;
};

struct AcceptedStep {
  int pass = 0;
  std::string parameter;
  double old_value = 0.0;
  double new_value = 0.0;
  double objective = 0.0;  // after the step
};

struct DescentResult {
  env::EnvParams params;
  double start_objective = 0.0;
  double final_objective = 0.0;
  int passes = 0;
  std::vector<AcceptedStep> steps;
  std::vector<double> pass_objectives;  // objective after each pass
};

// Cycles over `parameters` (paths, wildcards allowed). For each parameter all
// probes are evaluated and the best is accepted only if it lowers the
// objective by more than 0.1% relative; an accepted parameter is probed again
// from its new value. Stops after a pass without any accepted step.
DescentResult CoordinateDescent(
    const env::EnvParams& start,
    const std::vector<RecordedTrajectory>& trajectories,
    const std::vector<std::string>& parameters,
    const DescentOptions& options = {});

// Structured-text diff of start vs final parameters plus the history.
std::string FormatReport(const env::EnvParams& start,
                         const DescentResult& result);

}  // namespace dexsim::sysid

#endif  // DEXSIM_SYSID_CALIBRATION_H_
