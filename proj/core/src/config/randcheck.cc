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

#include "dexsim/config/randcheck.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "dexsim/common/errors.h"
#include "dexsim/common/quaternion.h"
#include "dexsim/common/rng.h"
#include "dexsim/common/text_format.h"
#include "dexsim/env/observations.h"
#include "dexsim/rand/layers.h"
#include "dexsim/vision/image.h"
#include "dexsim/vision/pose_augment.h"
#include "dexsim/vision/scene_draw.h"

namespace dexsim::config {

namespace {

// Reference table values.
constexpr double kFingertipCorrelated = 0.001;
constexpr double kFingertipUncorrelated = 0.002;
constexpr double kObjectPositionCorrelated = 0.005;
constexpr double kObjectPositionUncorrelated = 0.001;
constexpr double kOrientationCorrelated = 0.1;
constexpr double kOrientationUncorrelated = 0.1;
constexpr double kFingertipMarker = 0.003;
constexpr double kHandBaseMarker = 0.001;
constexpr double kActionUncorrelated = 0.05 * rand::kActionRange;
constexpr double kActionCorrelated = 0.015 * rand::kActionRange;
constexpr double kDropoutRate = 0.2;
constexpr double kRateMin = 1250.0;
constexpr double kRateMax = 10000.0;
constexpr double kForceProbabilityMin = 0.001;
constexpr double kForceProbabilityMax = 0.1;
constexpr double kForceDecay = 0.99;
constexpr double kForceAcceleration = 1.0;

constexpr double kStdTolerance = 0.03;
constexpr double kActionTolerance = 0.02;
constexpr double kDropoutTolerance = 0.05;
constexpr double kTimingTolerance = 0.01;
constexpr double kForceStdTolerance = 0.01;
constexpr double kDecayTolerance = 1e-12;
constexpr double kLightTolerance = 0.02;
constexpr double kBranchTolerance = 0.01;
constexpr double kImageTolerance = 1e-9;
// Kolmogorov-Smirnov critical coefficient at the 1% level.
constexpr double kKsCoefficient = 1.628;

class RmsAccumulator {
 public:
  void Add(double x) {
    sum_sq_ += x * x;
    ++n_;
  }
  void Add(const Eigen::Vector3d& v) {
    for (int k = 0; k < 3; ++k) Add(v[k]);
  }
  double Value() const { return n_ ? std::sqrt(sum_sq_ / n_) : 0.0; }

 private:
  double sum_sq_ = 0.0;
  long n_ = 0;
};

CheckResult Relative(const std::string& name, double measured, double expected,
                     double tolerance) {
  CheckResult r{name, measured, expected, tolerance, false, false};
  r.pass = std::abs(measured - expected) <= tolerance * std::abs(expected);
  return r;
}

CheckResult Absolute(const std::string& name, double measured, double expected,
                     double tolerance) {
  CheckResult r{name, measured, expected, tolerance, false, false};
  r.pass = std::abs(measured - expected) <= tolerance;
  return r;
}

CheckResult Skipped(const std::string& name) {
  CheckResult r;
  r.name = name;
  r.skipped = true;
  r.pass = true;
  return r;
}

// Two-sided KS statistic of `values` against the CDF `cdf`.
double KsStatistic(std::vector<double> values,
                   const std::function<double(double)>& cdf) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

CheckResult Ks(const std::string& name, std::vector<double> values,
               const std::function<double(double)>& cdf) {
  const double crit = kKsCoefficient / std::sqrt(values.size());
  CheckResult r{name, KsStatistic(std::move(values), cdf), 0.0, crit, false,
                false};
  r.pass = r.measured <= crit;
  return r;
}

double RotationAngle(const Quaternion& q) {
  return GoalDistance(q, Quaternion::Identity());
}

void EpisodeChecks(const rand::RandomizationSpec& spec,
                   const env::EnvParams& base, int n, std::uint64_t seed,
                   std::vector<CheckResult>& out) {
  // Physical parameters are not under test here; resolving their paths per
  // draw would dominate the runtime.
  rand::RandomizationSpec draws = spec;
  draws.physical.enabled = false;
  draws.physical.params.clear();
  Rng rng = MakeRng(seed, {1});
  RmsAccumulator tip, obj, ori, tip_marker, base_marker, action;
  std::vector<double> probability;
  probability.reserve(n);
  Rng action_rng = MakeRng(seed, {2});
  const rand::JointVector zero = rand::JointVector::Zero();
  for (int s = 0; s < n; ++s) {
    rand::EpisodeNoiseState ns = rand::SampleEpisode(draws, base, rng);
    for (const auto& v : ns.fingertip_offset) tip.Add(v);
    obj.Add(ns.object_position_offset);
    ori.Add(RotationAngle(ns.orientation_offset));
    for (const auto& v : ns.fingertip_marker_offset) tip_marker.Add(v);
    base_marker.Add(ns.hand_base_marker_offset);
    probability.push_back(ns.force_probability);
    if (spec.action_noise.enabled) {
      const rand::JointVector a =
          rand::PerturbAction(zero, ns, spec.action_noise, action_rng);
      for (int i = 0; i < rand::kNumJoints; ++i) action.Add(a[i]);
    }
  }

  if (spec.observation_noise.enabled) {
    out.push_back(Relative("obs.fingertip_correlated_std", tip.Value(),
                           kFingertipCorrelated, kStdTolerance));
    out.push_back(Relative("obs.object_position_correlated_std", obj.Value(),
                           kObjectPositionCorrelated, kStdTolerance));
    out.push_back(Relative("obs.orientation_correlated_rms_rad", ori.Value(),
                           kOrientationCorrelated, kStdTolerance));
    out.push_back(Relative("obs.fingertip_marker_std", tip_marker.Value(),
                           kFingertipMarker, kStdTolerance));
    out.push_back(Relative("obs.hand_base_marker_std", base_marker.Value(),
                           kHandBaseMarker, kStdTolerance));
  } else {
    for (const char* name :
         {"obs.fingertip_correlated_std", "obs.object_position_correlated_std",
          "obs.orientation_correlated_rms_rad", "obs.fingertip_marker_std",
          "obs.hand_base_marker_std"}) {
      out.push_back(Skipped(name));
    }
  }

  if (spec.action_noise.enabled) {
    out.push_back(Relative("action.composite_std_at_zero", action.Value(),
                           std::hypot(kActionUncorrelated, kActionCorrelated),
                           kActionTolerance));
  } else {
    out.push_back(Skipped("action.composite_std_at_zero"));
  }

  if (spec.random_force.enabled) {
    const double lo = std::log(kForceProbabilityMin);
    const double hi = std::log(kForceProbabilityMax);
    std::vector<double> logs;
    logs.reserve(probability.size());
    for (double p : probability) logs.push_back(std::log(p));
    out.push_back(Ks("force.probability_loguniform_ks", std::move(logs),
                     [lo, hi](double x) {
                       return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
                     }));
  } else {
    out.push_back(Skipped("force.probability_loguniform_ks"));
  }
}

void UncorrelatedObservationChecks(const rand::RandomizationSpec& spec, int n,
                                   std::uint64_t seed,
                                   std::vector<CheckResult>& out) {
  if (!spec.observation_noise.enabled) {
    for (const char* name :
         {"obs.fingertip_uncorrelated_std",
          "obs.object_position_uncorrelated_std",
          "obs.orientation_uncorrelated_rms_rad"}) {
      out.push_back(Skipped(name));
    }
    return;
  }
  Rng rng = MakeRng(seed, {3});
  const rand::EpisodeNoiseState neutral;
  env::SensorReadings readings;
  readings.fingertips.fill(Eigen::Vector3d::Zero());
  readings.object_position.setZero();
  readings.relative_goal = Quaternion::Identity();
  RmsAccumulator tip, obj, ori;
  for (int s = 0; s < n; ++s) {
    const env::SensorReadings r = rand::PerturbObservation(
        readings, neutral, spec.observation_noise, rng);
    for (const auto& v : r.fingertips) tip.Add(v);
    obj.Add(r.object_position);
    ori.Add(RotationAngle(r.relative_goal));
  }
  out.push_back(Relative("obs.fingertip_uncorrelated_std", tip.Value(),
                         kFingertipUncorrelated, kStdTolerance));
  out.push_back(Relative("obs.object_position_uncorrelated_std", obj.Value(),
                         kObjectPositionUncorrelated, kStdTolerance));
  out.push_back(Relative("obs.orientation_uncorrelated_rms_rad", ori.Value(),
                         kOrientationUncorrelated, kStdTolerance));
}

void DropoutCheck(const rand::RandomizationSpec& spec, int n,
                  std::uint64_t seed, std::vector<CheckResult>& out) {
  if (!spec.marker_dropout.enabled) {
    out.push_back(Skipped("dropout.initiation_rate_per_s"));
    return;
  }
  Rng rng = MakeRng(seed, {4});
  rand::EpisodeNoiseState ns;
  rand::Markers markers;
  markers.fill(Eigen::Vector3d::Zero());
  rand::RememberMarkers(markers, ns);
  const double dt = env::kStepDuration;
  const double fresh = spec.marker_dropout.duration - dt;
  long initiations = 0;
  for (int s = 0; s < n; ++s) {
    rand::MarkerDropout(markers, ns, spec.marker_dropout, dt, rng);
    for (double remaining : ns.dropout_remaining) {
      if (remaining == fresh) ++initiations;
    }
  }
  const double exposure = static_cast<double>(n) * dt * rand::kNumJoints;
  out.push_back(Relative("dropout.initiation_rate_per_s",
                         initiations / exposure, kDropoutRate,
                         kDropoutTolerance));
}

void TimingChecks(const rand::RandomizationSpec& spec, int n,
                  std::uint64_t seed, std::vector<CheckResult>& out) {
  if (!spec.timing.enabled) {
    out.push_back(Skipped("timing.substep_mean_s"));
    out.push_back(Skipped("timing.substep_mean_at_min_rate_s"));
    return;
  }
  Rng rng = MakeRng(seed, {5});
  rand::RandomizationSpec only_timing = rand::RandomizationSpec::AllDisabled();
  only_timing.physical.params.clear();
  only_timing.timing = spec.timing;
  const env::EnvParams base;
  double sum = 0.0;
  long count = 0;
  for (int s = 0; s < n; ++s) {
    const rand::EpisodeNoiseState ns =
        rand::SampleEpisode(only_timing, base, rng);
    for (double d : rand::SampleSubsteps(ns, rng)) {
      sum += d;
      ++count;
    }
  }
  // E[1/lambda] for lambda ~ U[min, max].
  const double mean_inverse =
      std::log(kRateMax / kRateMin) / (kRateMax - kRateMin);
  out.push_back(Relative("timing.substep_mean_s", sum / count,
                         env::kNominalSubstep + mean_inverse,
                         kTimingTolerance));

  rand::EpisodeNoiseState fixed;
  fixed.timing_rate = spec.timing.rate_min;
  sum = 0.0;
  count = 0;
  for (int s = 0; s < n; ++s) {
    for (double d : rand::SampleSubsteps(fixed, rng)) {
      sum += d;
      ++count;
    }
  }
  out.push_back(Relative("timing.substep_mean_at_min_rate_s", sum / count,
                         env::kNominalSubstep + 1.0 / kRateMin,
                         kTimingTolerance));
}

void ForceChecks(const rand::RandomizationSpec& spec,
                 const env::EnvParams& base, int n, std::uint64_t seed,
                 std::vector<CheckResult>& out) {
  if (!spec.random_force.enabled) {
    out.push_back(Skipped("force.decay_per_step_max_rel_error"));
    out.push_back(Skipped("force.std_over_mass"));
    return;
  }
  const double mass = base.object_mass;
  Rng rng = MakeRng(seed, {6});

  // With p = 0 the stored force only decays.
  rand::EpisodeNoiseState ns;
  ns.force_probability = 0.0;
  const Eigen::Vector3d f0(1.0, -2.0, 0.5);
  ns.force = f0;
  double worst = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const Eigen::Vector3d f = rand::RandomForce(
        ns, mass, env::kStepDuration, spec.random_force, rng);
    const Eigen::Vector3d ref = f0 * std::pow(kForceDecay, k);
    worst = std::max(worst, ((f - ref).cwiseQuotient(ref)).cwiseAbs().maxCoeff());
  }
  out.push_back(Absolute("force.decay_per_step_max_rel_error", worst, 0.0,
                         kDecayTolerance));

  // With p = 1 every step is a fresh draw.
  ns.force_probability = 1.0;
  RmsAccumulator force;
  for (int s = 0; s < n; ++s) {
    force.Add(rand::RandomForce(ns, mass, env::kStepDuration,
                                spec.random_force, rng) /
              mass);
  }
  out.push_back(Relative("force.std_over_mass", force.Value(),
                         kForceAcceleration, kForceStdTolerance));
}

void VisionChecks(int n, std::uint64_t seed, std::vector<CheckResult>& out) {
  Rng rng = MakeRng(seed, {7});
  const vision::CalibratedHsv hsv{0.3, 0.6, 0.5};
  long violations = 0;
  std::array<long, vision::kMaxLights + 1> light_counts{};
  std::vector<double> camera_x;
  camera_x.reserve(n);
  for (int s = 0; s < n; ++s) {
    const vision::SceneDraw d = vision::SampleSceneDraw(hsv, rng);
    violations += static_cast<long>(vision::CheckSceneDraw(d, hsv).size());
    ++light_counts[d.lights.size()];
    camera_x.push_back(d.cameras[0].position_offset.x());
  }
  out.push_back(Absolute("vision.scene_draw_violations", violations, 0.0, 0.0));
  double worst = 0.0;
  const double uniform = 1.0 / (vision::kMaxLights - vision::kMinLights + 1);
  for (int k = vision::kMinLights; k <= vision::kMaxLights; ++k) {
    const double f = static_cast<double>(light_counts[k]) / n;
    worst = std::max(worst, std::abs(f - uniform) / uniform);
  }
  out.push_back(Absolute("vision.light_count_max_rel_deviation", worst, 0.0,
                         kLightTolerance));
  const double r = vision::kCameraPositionRange;
  out.push_back(Ks("vision.camera_position_uniform_ks", std::move(camera_x),
                   [r](double x) {
                     return std::clamp((x + r) / (2.0 * r), 0.0, 1.0);
                   }));

  std::array<long, 3> branches{};
  vision::Pose pose;
  for (int s = 0; s < n; ++s) {
    ++branches[static_cast<int>(vision::PoseAugment(pose, rng).branch)];
  }
  const std::array<double, 3> expected = {0.2, 0.4, 0.4};
  const std::array<const char*, 3> names = {"vision.pose_identity_fraction",
                                            "vision.pose_quarter_turn_fraction",
                                            "vision.pose_jitter_fraction"};
  for (int b = 0; b < 3; ++b) {
    out.push_back(Absolute(names[b], static_cast<double>(branches[b]) / n,
                           expected[b], kBranchTolerance));
  }

  vision::AugmentOptions pinned;
  pinned.pinned_contrast = 1.0;
  pinned.pinned_noise_sigma = 0.0;
  double worst_mean = 0.0;
  double worst_std = 0.0;
  for (int s = 0; s < 20; ++s) {
    vision::ImageBuffer img = vision::ImageBuffer::Zeros(16, 16);
    for (double& v : img.data) v = Uniform(rng, 0.0, 255.0);
    const vision::ImageBuffer o = vision::AugmentImage(img, rng, pinned);
    double mean = 0.0;
    for (double v : o.data) mean += v;
    mean /= o.data.size();
    double var = 0.0;
    for (double v : o.data) var += (v - mean) * (v - mean);
    var /= o.data.size();
    worst_mean = std::max(worst_mean, std::abs(mean));
    worst_std = std::max(worst_std, std::abs(std::sqrt(var) - 1.0));
  }
  out.push_back(
      Absolute("vision.normalized_abs_mean", worst_mean, 0.0, kImageTolerance));
  out.push_back(Absolute("vision.normalized_std_abs_error", worst_std, 0.0,
                         kImageTolerance));
}

}  // namespace

std::vector<CheckResult> RunRandcheck(const rand::RandomizationSpec& spec,
                                      const env::EnvParams& base, int samples,
                                      std::uint64_t seed) {
  if (samples < 1) throw ConfigError("randcheck requires samples >= 1");
  spec.Validate(base);
  std::vector<CheckResult> out;
  EpisodeChecks(spec, base, samples, seed, out);
  UncorrelatedObservationChecks(spec, samples, seed, out);
  DropoutCheck(spec, samples, seed, out);
  TimingChecks(spec, samples, seed, out);
  ForceChecks(spec, base, samples, seed, out);
  VisionChecks(samples, seed, out);
  return out;
}

bool AllPassed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

namespace {

// A degenerate spec can make a statistic non-finite; report it as a failure
// instead of aborting the report.
std::string FormatStat(double v) {
  return std::isfinite(v) ? FormatDouble(v) : std::to_string(v);
}

}  // namespace

std::string FormatCheck(const CheckResult& r) {
  std::ostringstream s;
  if (r.skipped) {
    s << "SKIP " << r.name << " (layer disabled)";
    return s.str();
  }
  s << (r.pass ? "PASS " : "FAIL ") << r.name
    << " measured=" << FormatStat(r.measured)
    << " expected=" << FormatStat(r.expected)
    << " tol=" << FormatStat(r.tolerance);
  return s.str();
}

}  // namespace dexsim::config
