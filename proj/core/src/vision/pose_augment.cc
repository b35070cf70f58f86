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

#include "dexsim/vision/pose_augment.h"

#include <cmath>
#include <numbers>

#include "dexsim/common/errors.h"

namespace dexsim::vision {

PoseAugmentResult PoseAugment(const Pose& pose, Rng& rng,
                              const PoseAugmentOptions& options) {
  if (std::abs(pose.orientation.norm() - 1.0) > kUnitNormTolerance) {
    throw UsageError("pose orientation must be a unit quaternion");
  }
  PoseAugmentResult out;
  out.pose = pose;
  const double u = Uniform(rng, 0.0, 1.0);
  if (options.forced_branch) {
    out.branch = *options.forced_branch;
  } else if (u < options.identity_probability) {
    out.branch = PoseBranch::kIdentity;
  } else if (u < options.identity_probability +
                     options.quarter_turn_probability) {
    out.branch = PoseBranch::kQuarterTurn;
  } else {
    out.branch = PoseBranch::kJitter;
  }

  switch (out.branch) {
    case PoseBranch::kIdentity:
      break;
    case PoseBranch::kQuarterTurn: {
      const int axis = UniformInt(rng, 0, 2);
      const double sign = Bernoulli(rng, 0.5) ? 1.0 : -1.0;
      out.pose.orientation =
          pose.orientation *
          AxisAngle(Eigen::Vector3d::Unit(axis), sign * std::numbers::pi / 2);
      out.pose.orientation.normalize();
      break;
    }
    case PoseBranch::kJitter: {
      out.pose.position += NormalVector3(rng, options.position_sigma);
      const double angle = Normal(rng, 0.0, options.rotation_sigma);
      out.pose.orientation =
          AxisAngle(UniformUnitVector3(rng), angle) * pose.orientation;
      out.pose.orientation.normalize();
      break;
    }
  }
  return out;
}

}  // namespace dexsim::vision
