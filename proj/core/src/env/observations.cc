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

#include "dexsim/env/observations.h"

namespace dexsim::env {

namespace {

void PutQuat(Eigen::VectorXd& out, int& k, const Quaternion& q) {
  out[k++] = q.w();
  out[k++] = q.x();
  out[k++] = q.y();
  out[k++] = q.z();
}

void PutVec3(Eigen::VectorXd& out, int& k, const Eigen::Vector3d& v) {
  for (int i = 0; i < 3; ++i) out[k++] = v[i];
}

}  // namespace

SensorReadings TrueReadings(const EnvState& state, const EnvParams& params) {
  SensorReadings r;
  r.fingertips = FingertipPositions(state.q, params);
  r.object_position = state.position;
  r.relative_goal = RelativeRotation(state.goal, state.orientation);
  return r;
}

ObservationPair BuildObservations(const EnvState& state,
                                  const EnvParams& params,
                                  const SensorReadings* noisy) {
  const SensorReadings truth = TrueReadings(state, params);
  const SensorReadings& seen = noisy ? *noisy : truth;

  ObservationPair obs;
  obs.policy.resize(kPolicyObsSize);
  int k = 0;
  PutQuat(obs.policy, k, seen.relative_goal);
  for (const auto& tip : seen.fingertips) PutVec3(obs.policy, k, tip);
  PutVec3(obs.policy, k, seen.object_position);

  obs.value.resize(kValueObsSize);
  k = 0;
  PutQuat(obs.value, k, truth.relative_goal);
  PutQuat(obs.value, k, state.goal);
  for (const auto& tip : truth.fingertips) PutVec3(obs.value, k, tip);
  PutVec3(obs.value, k, truth.object_position);
  PutQuat(obs.value, k, state.orientation);
  for (int i = 0; i < kNumJoints; ++i) obs.value[k++] = state.q[i];
  for (int i = 0; i < kNumJoints; ++i) obs.value[k++] = state.qdot[i];
  PutVec3(obs.value, k, state.velocity);
  PutVec3(obs.value, k, state.angular_velocity);
  return obs;
}

}  // namespace dexsim::env
