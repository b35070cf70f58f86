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

#ifndef DEXSIM_ENV_ENV_PARAMS_H_
#define DEXSIM_ENV_ENV_PARAMS_H_

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dexsim::env {

inline constexpr int kNumJoints = 5;
inline constexpr int kNumBins = 11;

using JointVector = Eigen::Matrix<double, kNumJoints, 1>;

struct JointParams {
  double damping = 0.05;       // N*m*s/rad
  double equilibrium = 0.0;    // rad
  double friction = 0.005;     // N*m
  double stiffness = 0.05;     // N*m/rad
  double range_min = -0.6;     // rad
  double range_max = 0.6;      // rad
};

struct ActuatorParams {
  double gain = 1.0;           // N*m/rad
  double force_range = 1.0;    // N*m
  double backlash_neg = 25.0;  // slack rate, 1/s per unit action
  double backlash_pos = 25.0;
};

struct EnvParams {
  std::array<JointParams, kNumJoints> joints;
  std::array<ActuatorParams, kNumJoints> actuators;
  double joint_inertia = 1e-3;          // kg*m^2

  double object_mass = 0.1;             // kg
  double object_inertia = 2e-4;         // kg*m^2
  double contact_radius = 0.065;        // m
  double coupling_gain = 0.01;          // N*m/rad
  double centering_stiffness = 50.0;    // N/m
  double object_linear_damping = 1.0;   // N*s/m
  double object_angular_damping = 2e-3; // N*m*s
  double gravity = 9.81;                // m/s^2
  double drop_height = -0.05;           // m
  double finger_length = 0.06;          // m

  Eigen::Vector3d palm_center = Eigen::Vector3d::Zero();
  std::array<Eigen::Vector3d, kNumJoints> finger_base;
  std::array<Eigen::Vector3d, kNumJoints> coupling_axis;

  // Builds the default five-finger layout.
  static EnvParams Defaults();

  // Throws ConfigError naming the first violated invariant.
  void Validate() const;

  bool operator==(const EnvParams& other) const;
};

// Half the joint range: the joint displacement produced by a unit action.
double ActionScale(const JointParams& joint);

// Addressable scalar parameter ("joint.2.damping", "object.mass", ...).
struct ParamRef {
  std::string name;
  double* value;
  double unit_scale;  // Typical magnitude, used for additive probes.
  bool is_signed;     // May legitimately cross zero (equilibrium, positions).
};

struct ConstParamRef {
  std::string name;
  const double* value;
  double unit_scale;
  bool is_signed;
};

std::vector<ParamRef> ListParams(EnvParams& params);
std::vector<ConstParamRef> ListParams(const EnvParams& params);

// Resolves a path that may contain '*' as the index component
// ("joint.*.damping"). Throws ConfigError for unknown paths.
std::vector<ParamRef> ResolveParamPath(EnvParams& params,
                                       const std::string& path);
double& ParamByName(EnvParams& params, const std::string& name);
double ParamByName(const EnvParams& params, const std::string& name);

}  // namespace dexsim::env

#endif  // DEXSIM_ENV_ENV_PARAMS_H_
