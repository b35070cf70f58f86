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

#include "dexsim/vision/scene_draw.h"

#include <cmath>
#include <sstream>

#include "dexsim/common/errors.h"
#include "dexsim/common/text_format.h"

namespace dexsim::vision {

namespace {

bool InUnit(double v) { return v >= 0.0 && v <= 1.0; }

// Signed hue difference on the unit circle, in [-0.5, 0.5).
double HueDelta(double a, double b) {
  double d = std::fmod(a - b, 1.0);
  if (d < -0.5) d += 1.0;
  if (d >= 0.5) d -= 1.0;
  return d;
}

std::string Vec3(const Eigen::Vector3d& v) {
  return FormatArray(std::vector<double>{v.x(), v.y(), v.z()});
}

}  // namespace

SceneDraw SampleSceneDraw(const std::optional<CalibratedHsv>& calibrated,
                          Rng& rng) {
  if (!calibrated) {
    throw ConfigError("scene draw: calibrated object hue/saturation/value "
                      "are required");
  }
  const CalibratedHsv& cal = *calibrated;
  if (!InUnit(cal.hue) || !InUnit(cal.saturation) || !InUnit(cal.value)) {
    throw ConfigError("scene draw: calibrated HSV components must be in [0, 1]");
  }
  SceneDraw d;
  for (CameraDraw& c : d.cameras) {
    for (int k = 0; k < 3; ++k) {
      c.position_offset[k] =
          Uniform(rng, -kCameraPositionRange, kCameraPositionRange);
    }
    c.rotation_axis = UniformUnitVector3(rng);
    c.rotation_deg = Uniform(rng, 0.0, kCameraRotationMax);
    c.fov_offset_deg = Uniform(rng, -kCameraFovRange, kCameraFovRange);
  }
  for (int k = 0; k < 3; ++k) d.robot_rgb[k] = Uniform(rng, 0.0, 1.0);
  d.robot_metallic = Uniform(rng, kRobotMetallicMin, kRobotMetallicMax);
  d.robot_glossiness = Uniform(rng, kRobotGlossMin, kRobotGlossMax);
  d.object_hue = cal.hue + Uniform(rng, -kObjectHueRange, kObjectHueRange);
  d.object_hue -= std::floor(d.object_hue);
  d.object_saturation = std::clamp(
      cal.saturation + Uniform(rng, -kObjectSvRange, kObjectSvRange), 0.0, 1.0);
  d.object_value = std::clamp(
      cal.value + Uniform(rng, -kObjectSvRange, kObjectSvRange), 0.0, 1.0);
  d.object_metallic = Uniform(rng, kObjectMetallicMin, kObjectMetallicMax);
  d.object_glossiness = Uniform(rng, kObjectGlossMin, kObjectGlossMax);
  const int count = UniformInt(rng, kMinLights, kMaxLights);
  d.total_intensity = Uniform(rng, 0.0, kTotalIntensityMax);
  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    LightDraw l;
    l.direction = UniformUnitVector3(rng);
    l.direction.z() = std::abs(l.direction.z());
    l.relative_intensity = Uniform(rng, kLightRelativeMin, kLightRelativeMax);
    sum += l.relative_intensity;
    d.lights.push_back(l);
  }
  for (LightDraw& l : d.lights) {
    l.intensity = d.total_intensity * l.relative_intensity / sum;
  }
  return d;
}

std::vector<std::string> CheckSceneDraw(const SceneDraw& d,
                                        const CalibratedHsv& cal) {
  std::vector<std::string> bad;
  auto check = [&bad](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  for (int i = 0; i < kNumCameras; ++i) {
    const CameraDraw& c = d.cameras[i];
    const std::string p = "camera " + std::to_string(i) + " ";
    check(c.position_offset.cwiseAbs().maxCoeff() <= kCameraPositionRange,
          p + "position offset");
    check(std::abs(c.rotation_axis.norm() - 1.0) < 1e-9, p + "rotation axis");
    check(c.rotation_deg >= 0.0 && c.rotation_deg <= kCameraRotationMax,
          p + "rotation");
    check(std::abs(c.fov_offset_deg) <= kCameraFovRange, p + "field of view");
  }
  check(d.robot_rgb.minCoeff() >= 0.0 && d.robot_rgb.maxCoeff() <= 1.0,
        "robot rgb");
  check(d.robot_metallic >= kRobotMetallicMin &&
            d.robot_metallic <= kRobotMetallicMax,
        "robot metallic");
  check(d.robot_glossiness >= kRobotGlossMin &&
            d.robot_glossiness <= kRobotGlossMax,
        "robot glossiness");
  check(d.object_hue >= 0.0 && d.object_hue < 1.0 &&
            std::abs(HueDelta(d.object_hue, cal.hue)) <= kObjectHueRange + 1e-12,
        "object hue");
  check(InUnit(d.object_saturation) &&
            std::abs(d.object_saturation - cal.saturation) <= kObjectSvRange,
        "object saturation");
  check(InUnit(d.object_value) &&
            std::abs(d.object_value - cal.value) <= kObjectSvRange,
        "object value");
  check(d.object_metallic >= kObjectMetallicMin &&
            d.object_metallic <= kObjectMetallicMax,
        "object metallic");
  check(d.object_glossiness >= kObjectGlossMin &&
            d.object_glossiness <= kObjectGlossMax,
        "object glossiness");
  const int n = static_cast<int>(d.lights.size());
  check(n >= kMinLights && n <= kMaxLights, "light count");
  check(d.total_intensity >= 0.0 && d.total_intensity <= kTotalIntensityMax,
        "total intensity");
  double sum = 0.0;
  for (const LightDraw& l : d.lights) {
    check(std::abs(l.direction.norm() - 1.0) < 1e-9 && l.direction.z() >= 0.0,
          "light position");
    check(l.relative_intensity >= kLightRelativeMin &&
              l.relative_intensity <= kLightRelativeMax,
          "light relative intensity");
    check(l.intensity >= 0.0, "light intensity");
    sum += l.intensity;
  }
  check(std::abs(sum - d.total_intensity) <= 1e-9 * (1.0 + d.total_intensity),
        "light intensity sum");
  return bad;
}

std::string FormatSceneDraw(const SceneDraw& d) {
  std::ostringstream s;
  s << "{\"cameras\":[";
  for (int i = 0; i < kNumCameras; ++i) {
    const CameraDraw& c = d.cameras[i];
    s << (i ? "," : "") << "{\"position_offset_m\":" << Vec3(c.position_offset)
      << ",\"rotation_axis\":" << Vec3(c.rotation_axis)
      << ",\"rotation_deg\":" << FormatDouble(c.rotation_deg)
      << ",\"fov_offset_deg\":" << FormatDouble(c.fov_offset_deg) << "}";
  }
  s << "],\"robot\":{\"rgb\":" << Vec3(d.robot_rgb)
    << ",\"metallic_fraction\":" << FormatDouble(d.robot_metallic)
    << ",\"glossiness_fraction\":" << FormatDouble(d.robot_glossiness)
    << "},\"object\":{\"hue_fraction\":" << FormatDouble(d.object_hue)
    << ",\"saturation_fraction\":" << FormatDouble(d.object_saturation)
    << ",\"value_fraction\":" << FormatDouble(d.object_value)
    << ",\"metallic_fraction\":" << FormatDouble(d.object_metallic)
    << ",\"glossiness_fraction\":" << FormatDouble(d.object_glossiness)
    << "},\"total_light_intensity\":" << FormatDouble(d.total_intensity)
    << ",\"lights\":[";
  for (std::size_t i = 0; i < d.lights.size(); ++i) {
    const LightDraw& l = d.lights[i];
    s << (i ? "," : "") << "{\"direction\":" << Vec3(l.direction)
      << ",\"relative_intensity\":" << FormatDouble(l.relative_intensity)
      << ",\"intensity\":" << FormatDouble(l.intensity) << "}";
  }
  s << "]}";
  return s.str();
}

}  // namespace dexsim::vision
