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

#ifndef DEXSIM_VISION_POSE_AUGMENT_H_
#define DEXSIM_VISION_POSE_AUGMENT_H_

#include <optional>

#include <Eigen/Core>

#include "dexsim/common/quaternion.h"
#include "dexsim/common/rng.h"

namespace dexsim::vision {

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Quaternion orientation = Quaternion::Identity();
};

enum class PoseBranch { kIdentity = 0, kQuarterTurn = 1, kJitter = 2 };

struct PoseAugmentOptions {
  double identity_probability = 0.2;
  double quarter_turn_probability = 0.4;  // remainder is jitter
  double position_sigma = 0.005;          // m
  double rotation_sigma = 0.05;           // rad
  std::optional<PoseBranch> forced_branch;
};

struct PoseAugmentResult {
  Pose pose;
  PoseBranch branch = PoseBranch::kIdentity;
};

// Identity; a 90 degree turn about a uniformly chosen signed body axis; or
// Gaussian jitter of position and orientation (random axis).
PoseAugmentResult PoseAugment(const Pose& pose, Rng& rng,
                              const PoseAugmentOptions& options = {});

}  // namespace dexsim::vision

#endif  // DEXSIM_VISION_POSE_AUGMENT_H_
