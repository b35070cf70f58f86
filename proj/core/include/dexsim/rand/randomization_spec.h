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

#ifndef DEXSIM_RAND_RANDOMIZATION_SPEC_H_
#define DEXSIM_RAND_RANDOMIZATION_SPEC_H_

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dexsim/env/env_params.h"

namespace dexsim::rand {

enum class DistributionKind {
  kLogNormal,   // value *= exp(N(0, a))
  kGaussian,    // value += N(0, a), in the parameter's units
  kUniform,     // value = U[a, b]
  kLogUniform,  // value = exp(U[ln a, ln b])
};

struct Distribution {
  DistributionKind kind = DistributionKind::kLogNormal;
  double a = 0.0;  // sigma, or lower bound
  double b = 0.0;  // upper bound for ranges

  static Distribution LogNormal(double sigma) {
    return {DistributionKind::kLogNormal, sigma, 0.0};
  }
  static Distribution Gaussian(double sigma) {
    return {DistributionKind::kGaussian, sigma, 0.0};
  }
  static Distribution UniformRange(double lo, double hi) {
    return {DistributionKind::kUniform, lo, hi};
  }
  static Distribution LogUniformRange(double lo, double hi) {
    return {DistributionKind::kLogUniform, lo, hi};
  }
};

std::string ToString(DistributionKind kind);
DistributionKind DistributionKindFromString(const std::string& text);

struct PhysicalLayer {
  bool enabled = true;
  // Parameter path (may contain '*') -> distribution. Applied in order.
  std::vector<std::pair<std::string, Distribution>> params;
};

// Standard deviations in meters / radians.
struct ObservationNoiseLayer {
  bool enabled = true;
  double fingertip_correlated = 0.001;
  double fingertip_uncorrelated = 0.002;
  double object_position_correlated = 0.005;
  double object_position_uncorrelated = 0.001;
  double orientation_correlated = 0.1;
  double orientation_uncorrelated = 0.1;
  double fingertip_marker = 0.003;
  double hand_base_marker = 0.001;
};

struct MarkerDropoutLayer {
  bool enabled = true;
  double rate = 0.2;      // 1/s
  double duration = 1.0;  // s
};

struct MarkerOcclusionLayer {
  bool enabled = true;
  double distance = 0.015;  // m
};

// Fractions of the action range [-1, 1] (range = 2).
struct ActionNoiseLayer {
  bool enabled = true;
  double uncorrelated_additive = 0.05;
  double correlated_additive = 0.015;
  double uncorrelated_multiplicative = 0.015;
};

struct ActionDelayLayer {
  bool enabled = true;
  double probability = 0.5;
};

struct TimingLayer {
  bool enabled = true;
  double rate_min = 1250.0;   // 1/s
  double rate_max = 10000.0;  // 1/s
};

struct BacklashLayer {
  bool enabled = true;
  double width_jitter = 0.1;
};

struct RandomForceLayer {
  bool enabled = true;
  double probability_min = 0.001;
  double probability_max = 0.1;
  double decay = 0.99;            // per decay_period
  double decay_period = 0.08;     // s
  double acceleration_std = 1.0;  // m/s^2, multiplied by object mass
};

inline constexpr std::array<std::string_view, 9> kLayerNames = {
    "physical",     "observation_noise", "marker_dropout",
    "marker_occlusion", "action_noise",  "action_delay",
    "timing",       "backlash",          "random_force"};

struct RandomizationSpec {
  PhysicalLayer physical;
  ObservationNoiseLayer observation_noise;
  MarkerDropoutLayer marker_dropout;
  MarkerOcclusionLayer marker_occlusion;
  ActionNoiseLayer action_noise;
  ActionDelayLayer action_delay;
  TimingLayer timing;
  BacklashLayer backlash;
  RandomForceLayer random_force;

  // Every layer on, with lognormal(0.2) on masses, damping, stiffness and
  // gains and small Gaussian offsets on the finger geometry.
  static RandomizationSpec Defaults();
  static RandomizationSpec AllDisabled();

  // Throws ConfigError; also resolves every parameter path against `base`.
  void Validate(const env::EnvParams& base) const;

  bool& LayerEnabled(std::string_view name);  // ConfigError if unknown
  bool LayerEnabled(std::string_view name) const;
  void SetAllLayers(bool enabled);
};

}  // namespace dexsim::rand

#endif  // DEXSIM_RAND_RANDOMIZATION_SPEC_H_
