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

#include "dexsim/common/quaternion.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dexsim/common/errors.h"

namespace dexsim {

namespace {

void RequireUnit(const Quaternion& q, const char* name) {
  double n = q.norm();
  if (!(std::abs(n - 1.0) <= kUnitNormTolerance)) {
    throw UsageError(std::string("invalid quaternion '") + name +
                     "': norm " + std::to_string(n));
  }
}

}  // namespace

double GoalDistance(const Quaternion& qa, const Quaternion& qb) {
  RequireUnit(qa, "qa");
  RequireUnit(qb, "qb");
  double dot = std::abs(qa.coeffs().dot(qb.coeffs()));
  return 2.0 * std::acos(std::min(1.0, dot));
}

Quaternion CanonicalizeScalarPositive(const Quaternion& q) {
  if (q.w() < 0.0) return Quaternion(-q.w(), -q.x(), -q.y(), -q.z());
  return q;
}

Quaternion UniformRandomQuaternion(Rng& rng) {
  while (true) {
    Eigen::Vector4d v;
    for (int i = 0; i < 4; ++i) v[i] = Normal(rng, 0.0, 1.0);
    double n = v.norm();
    if (n < 1e-12) continue;
    v /= n;
    return CanonicalizeScalarPositive(Quaternion(v[0], v[1], v[2], v[3]));
  }
}

Quaternion AxisAngle(const Eigen::Vector3d& axis, double angle) {
  return Quaternion(Eigen::AngleAxisd(angle, axis.normalized()));
}

Quaternion RelativeRotation(const Quaternion& goal,
                            const Quaternion& current) {
  return CanonicalizeScalarPositive(goal * current.conjugate());
}

std::array<double, 4> ToWxyz(const Quaternion& q) {
  return {q.w(), q.x(), q.y(), q.z()};
}

Quaternion FromWxyz(const std::array<double, 4>& wxyz) {
  return Quaternion(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
}

}  // namespace dexsim
