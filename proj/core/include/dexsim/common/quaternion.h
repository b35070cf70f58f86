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

#ifndef DEXSIM_COMMON_QUATERNION_H_
#define DEXSIM_COMMON_QUATERNION_H_

#include <array>

#include <Eigen/Geometry>

#include "dexsim/common/rng.h"

namespace dexsim {

using Quaternion = Eigen::Quaterniond;

inline constexpr double kUnitNormTolerance = 1e-6;

// Rotation angle in [0, pi] taking qa onto qb. Throws UsageError if either
// input is off unit norm by more than kUnitNormTolerance.
double GoalDistance(const Quaternion& qa, const Quaternion& qb);

// Flips the sign so that w >= 0 (same rotation).
Quaternion CanonicalizeScalarPositive(const Quaternion& q);

// Uniform random rotation: normalized 4-d standard Gaussian, w >= 0.
Quaternion UniformRandomQuaternion(Rng& rng);

// Rotation by `angle` about unit `axis`.
Quaternion AxisAngle(const Eigen::Vector3d& axis, double angle);

// goal * conj(current), canonicalized.
Quaternion RelativeRotation(const Quaternion& goal, const Quaternion& current);

std::array<double, 4> ToWxyz(const Quaternion& q);
Quaternion FromWxyz(const std::array<double, 4>& wxyz);

}  // namespace dexsim

#endif  // DEXSIM_COMMON_QUATERNION_H_
