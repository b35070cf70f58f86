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

#ifndef DEXSIM_VISION_SCENE_DRAW_H_
#define DEXSIM_VISION_SCENE_DRAW_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dexsim/common/rng.h"

namespace dexsim::vision {

inline constexpr int kNumCameras = 3;
inline constexpr double kCameraPositionRange = 0.0015;  // m, per axis
inline constexpr double kCameraRotationMax = 3.0;       // deg
inline constexpr double kCameraFovRange = 1.0;          // deg
inline constexpr double kRobotMetallicMin = 0.05;
inline constexpr double kRobotMetallicMax = 0.25;
inline constexpr double kRobotGlossMin = 0.0;
inline constexpr double kRobotGlossMax = 1.0;
inline constexpr double kObjectHueRange = 0.01;
inline constexpr double kObjectSvRange = 0.15;
inline constexpr double kObjectMetallicMin = 0.05;
inline constexpr double kObjectMetallicMax = 0.15;
inline constexpr double kObjectGlossMin = 0.05;
inline constexpr double kObjectGlossMax = 0.15;
inline constexpr int kMinLights = 4;
inline constexpr int kMaxLights = 6;
inline constexpr double kLightRelativeMin = 1.0;
inline constexpr double kLightRelativeMax = 5.0;
inline constexpr double kTotalIntensityMax = 15.0;

// Calibrated object colour, HSV components on [0, 1].
struct CalibratedHsv {
  double hue = 0.0;
  double saturation = 0.0;
  double value = 0.0;
};

struct CameraDraw {
  Eigen::Vector3d position_offset = Eigen::Vector3d::Zero();  // m
  Eigen::Vector3d rotation_axis = Eigen::Vector3d::UnitZ();   // unit
  double rotation_deg = 0.0;
  double fov_offset_deg = 0.0;
};

struct LightDraw {
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();  // unit, z >= 0
  double relative_intensity = 1.0;
  double intensity = 0.0;  // share of the total intensity
};

struct SceneDraw {
  std::array<CameraDraw, kNumCameras> cameras;
  Eigen::Vector3d robot_rgb = Eigen::Vector3d::Zero();
  double robot_metallic = 0.0;
  double robot_glossiness = 0.0;
  double object_hue = 0.0;  // wraps on [0, 1)
  double object_saturation = 0.0;
  double object_value = 0.0;
  double object_metallic = 0.0;
  double object_glossiness = 0.0;
  std::vector<LightDraw> lights;
  double total_intensity = 0.0;
};

// Every field uniform within its range. Object saturation and value are
// clamped to [0, 1]; hue wraps. Throws ConfigError without calibration.
SceneDraw SampleSceneDraw(const std::optional<CalibratedHsv>& calibrated,
                          Rng& rng);

// Empty when every field is inside its range; otherwise one message per
// violation.
std::vector<std::string> CheckSceneDraw(const SceneDraw& draw,
                                        const CalibratedHsv& calibrated);

// One JSON object per draw; units are part of the key names.
std::string FormatSceneDraw(const SceneDraw& draw);

}  // namespace dexsim::vision

#endif  // DEXSIM_VISION_SCENE_DRAW_H_
