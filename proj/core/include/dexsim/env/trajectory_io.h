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

#ifndef DEXSIM_ENV_TRAJECTORY_IO_H_
#define DEXSIM_ENV_TRAJECTORY_IO_H_

// Line-delimited trajectory records. Every real number is written with 17
// significant digits, so a file read back reproduces the doubles exactly.
//
//   {"type":"step","step":3,"time":0.24,"substeps":[...],"bins":[...],
//    "smoothed_action":[...],"q":[...],"qdot":[...],"position":[...],
//    "orientation":[w,x,y,z],"reward":0.1,"done_reason":"none"}
//   {"type":"snapshot","step":13,"state":{...},"slack":[...]}

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dexsim/env/toy_env.h"

namespace dexsim::env {

struct TrajectoryRecord {
  std::int64_t step = 0;
  double time = 0.0;  // s, at the end of the step
  Substeps substeps = NominalSubsteps();
  Bins bins{};
  JointVector smoothed_action = JointVector::Zero();
  JointVector q = JointVector::Zero();
  JointVector qdot = JointVector::Zero();
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Quaternion orientation = Quaternion::Identity();
  double reward = 0.0;
  DoneReason done_reason = DoneReason::kNone;
};

// Full simulator state taken before record `step` is executed.
struct StateSnapshot {
  std::int64_t step = 0;
  EnvState state;
  JointVector slack = JointVector::Zero();  // backlash slack per joint
};

struct TrajectoryFile {
  std::vector<TrajectoryRecord> records;
  std::vector<StateSnapshot> snapshots;
};

TrajectoryRecord MakeRecord(std::int64_t step, const Bins& bins,
                            const Substeps& substeps, const EnvState& after,
                            const StepResult& result);

std::string FormatRecord(const TrajectoryRecord& record);
std::string FormatSnapshot(const StateSnapshot& snapshot);

void WriteTrajectory(std::ostream& out, const TrajectoryFile& file);
// Throws FormatError naming the line on malformed input.
TrajectoryFile ReadTrajectory(std::istream& in);

void SaveTrajectory(const std::string& path, const TrajectoryFile& file);
TrajectoryFile LoadTrajectory(const std::string& path);

}  // namespace dexsim::env

#endif  // DEXSIM_ENV_TRAJECTORY_IO_H_
