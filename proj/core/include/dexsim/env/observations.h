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

#ifndef DEXSIM_ENV_OBSERVATIONS_H_
#define DEXSIM_ENV_OBSERVATIONS_H_

#include <array>

#include <Eigen/Core>

#include "dexsim/common/quaternion.h"
#include "dexsim/env/env_params.h"
#include "dexsim/env/toy_env.h"

namespace dexsim::env {

// [relative goal (4), fingertips (15), object position (3)]
inline constexpr int kPolicyObsSize = 4 + 3 * kNumJoints + 3;
// [relative goal (4), goal (4), fingertips (15), object position (3),
//  object quaternion (4), joint angles (5), joint velocities (5),
//  object linear + angular velocity (6)]
inline constexpr int kValueObsSize =
    4 + 4 + 3 * kNumJoints + 3 + 4 + kNumJoints + kNumJoints + 6;

struct ObservationPair {
  Eigen::VectorXd policy;  // what the deployed controller may see
  Eigen::VectorXd value;   // privileged, simulator-only
};

// The quantities a motion-capture rig would report for the policy view.
struct SensorReadings {
  std::array<Eigen::Vector3d, kNumJoints> fingertips;
  Eigen::Vector3d object_position;
  Quaternion relative_goal;
};

SensorReadings TrueReadings(const EnvState& state, const EnvParams& params);

// Policy view uses `noisy` when given, the true readings otherwise. The value
// view is always built from the true state.
ObservationPair BuildObservations(const EnvState& state,
                                  const EnvParams& params,
                                  const SensorReadings* noisy = nullptr);

}  // namespace dexsim::env

#endif  // DEXSIM_ENV_OBSERVATIONS_H_
