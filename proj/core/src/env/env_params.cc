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

#include "dexsim/env/env_params.h"

#include <cmath>
#include <numbers>

#include "dexsim/common/errors.h"

namespace dexsim::env {

EnvParams EnvParams::Defaults() {
  EnvParams p;
  const double base_radius = 0.08;
  for (int i = 0; i < kNumJoints; ++i) {
    double theta = 2.0 * std::numbers::pi * i / kNumJoints;
    p.finger_base[i] =
        Eigen::Vector3d(base_radius * std::cos(theta),
                        base_radius * std::sin(theta), 0.0);
  }
  const double h = std::sqrt(0.5);
  p.coupling_axis = {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0),
                     Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(h, h, 0),
                     Eigen::Vector3d(h, -h, 0)};
  return p;
}

void EnvParams::Validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  auto positive = [&](double v, const std::string& name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(name + " must be > 0");
  };
  for (int i = 0; i < kNumJoints; ++i) {
    const auto& j = joints[i];
    const std::string prefix = "joint." + std::to_string(i) + ".";
    if (!(j.range_min < j.range_max)) fail(prefix + "range_min >= range_max");
    if (!(j.damping >= 0.0)) fail(prefix + "damping must be >= 0");
    if (!(j.friction >= 0.0)) fail(prefix + "friction must be >= 0");
    if (!(j.stiffness >= 0.0)) fail(prefix + "stiffness must be >= 0");
    if (!std::isfinite(j.equilibrium)) fail(prefix + "equilibrium not finite");
    const auto& a = actuators[i];
    const std::string aprefix = "actuator." + std::to_string(i) + ".";
    positive(a.gain, aprefix + "gain");
    positive(a.force_range, aprefix + "force_range");
    if (!(a.backlash_neg >= 0.0) || !(a.backlash_pos >= 0.0)) {
      fail(aprefix + "backlash widths must be >= 0");
    }
    if (std::abs(coupling_axis[i].norm() - 1.0) > 1e-9) {
      fail("finger." + std::to_string(i) + ".axis must be unit length");
    }
  }
  positive(joint_inertia, "joint_inertia");
  positive(object_mass, "object.mass");
  positive(object_inertia, "object.inertia");
  positive(contact_radius, "object.contact_radius");
  positive(finger_length, "finger.length");
  if (!(coupling_gain >= 0.0)) fail("object.coupling_gain must be >= 0");
  if (!(centering_stiffness >= 0.0)) {
    fail("object.centering_stiffness must be >= 0");
  }
  if (!(object_linear_damping >= 0.0) || !(object_angular_damping >= 0.0)) {
    fail("object damping must be >= 0");
  }
  if (!(gravity >= 0.0)) fail("world.gravity must be >= 0");
}

bool EnvParams::operator==(const EnvParams& other) const {
  auto a = ListParams(*this);
  auto b = ListParams(other);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (*a[i].value != *b[i].value) return false;
  }
  return true;
}

double ActionScale(const JointParams& joint) {
  return 0.5 * (joint.range_max - joint.range_min);
}

namespace {

template <typename Ref, typename Params>
std::vector<Ref> ListImpl(Params& p) {
  std::vector<Ref> out;
  auto add = [&out](std::string name, auto* v, double scale, bool is_signed) {
    out.push_back(Ref{std::move(name), v, scale, is_signed});
  };
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string j = "joint." + std::to_string(i) + ".";
    auto& jp = p.joints[i];
    add(j + "damping", &jp.damping, 0.05, false);
    add(j + "equilibrium", &jp.equilibrium, 0.1, true);
    add(j + "friction", &jp.friction, 0.005, false);
    add(j + "stiffness", &jp.stiffness, 0.05, false);
    add(j + "range_min", &jp.range_min, 0.1, true);
    add(j + "range_max", &jp.range_max, 0.1, true);
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const std::string a = "actuator." + std::to_string(i) + ".";
    auto& ap = p.actuators[i];
    add(a + "gain", &ap.gain, 1.0, false);
    add(a + "force_range", &ap.force_range, 1.0, false);
    add(a + "backlash_neg", &ap.backlash_neg, 10.0, false);
    add(a + "backlash_pos", &ap.backlash_pos, 10.0, false);
  }
  add("joint_inertia", &p.joint_inertia, 1e-3, false);
  add("object.mass", &p.object_mass, 0.1, false);
  add("object.inertia", &p.object_inertia, 2e-4, false);
  add("object.contact_radius", &p.contact_radius, 0.01, false);
  add("object.coupling_gain", &p.coupling_gain, 0.01, false);
  add("object.centering_stiffness", &p.centering_stiffness, 50.0, false);
  add("object.linear_damping", &p.object_linear_damping, 1.0, false);
  add("object.angular_damping", &p.object_angular_damping, 2e-3, false);
  add("world.gravity", &p.gravity, 1.0, false);
  add("world.drop_height", &p.drop_height, 0.01, true);
  add("finger.length", &p.finger_length, 0.01, false);
  static const char* kAxes[3] = {"x", "y", "z"};
  for (int k = 0; k < 3; ++k) {
    add(std::string("palm.") + kAxes[k], &p.palm_center[k], 0.001, true);
  }
  for (int i = 0; i < kNumJoints; ++i) {
    for (int k = 0; k < 3; ++k) {
      add("finger." + std::to_string(i) + ".base." + kAxes[k],
          &p.finger_base[i][k], 0.001, true);
    }
  }
  // Coupling axes are unit vectors; not addressable per component.
  return out;
}

bool MatchesPattern(const std::string& pattern, const std::string& name) {
  // '*' matches one dot-free component.
  std::size_t p = 0, n = 0;
  while (p < pattern.size() && n < name.size()) {
    if (pattern[p] == '*') {
      while (n < name.size() && name[n] != '.') ++n;
      ++p;
    } else if (pattern[p] == name[n]) {
      ++p;
      ++n;
    } else {
      return false;
    }
  }
  return p == pattern.size() && n == name.size();
}

}  // namespace

std::vector<ParamRef> ListParams(EnvParams& params) {
  return ListImpl<ParamRef>(params);
}

std::vector<ConstParamRef> ListParams(const EnvParams& params) {
  return ListImpl<ConstParamRef>(params);
}

std::vector<ParamRef> ResolveParamPath(EnvParams& params,
                                       const std::string& path) {
  std::vector<ParamRef> out;
  for (auto& ref : ListParams(params)) {
    if (MatchesPattern(path, ref.name)) out.push_back(ref);
  }
  if (out.empty()) throw ConfigError("unknown parameter path: " + path);
  return out;
}

double& ParamByName(EnvParams& params, const std::string& name) {
  auto refs = ResolveParamPath(params, name);
  if (refs.size() != 1) {
    throw ConfigError("parameter name must not be a pattern: " + name);
  }
  return *refs.front().value;
}

double ParamByName(const EnvParams& params, const std::string& name) {
  for (const auto& ref : ListParams(params)) {
    if (ref.name == name) return *ref.value;
  }
  throw ConfigError("unknown parameter path: " + name);
}

}  // namespace dexsim::env
