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

#include "dexsim/rand/layers.h"

#include <algorithm>
#include <cmath>

#include "dexsim/common/errors.h"

namespace dexsim::rand {

EpisodeNoiseState::EpisodeNoiseState() {
  fingertip_offset.fill(Eigen::Vector3d::Zero());
  fingertip_marker_offset.fill(Eigen::Vector3d::Zero());
  last_marker.fill(Eigen::Vector3d::Zero());
}

namespace {

void ApplyDistribution(double& value, const Distribution& d, Rng& rng) {
  switch (d.kind) {
    case DistributionKind::kLogNormal:
      value *= std::exp(Normal(rng, 0.0, d.a));
      break;
    case DistributionKind::kGaussian:
      value += Normal(rng, 0.0, d.a);
      break;
    case DistributionKind::kUniform:
      value = Uniform(rng, d.a, d.b);
      break;
    case DistributionKind::kLogUniform:
      value = LogUniform(rng, d.a, d.b);
      break;
  }
}

Quaternion RandomAxisRotation(double angle_std, Rng& rng) {
  if (angle_std == 0.0) return Quaternion::Identity();
  Eigen::Vector3d axis = UniformUnitVector3(rng);
  return AxisAngle(axis, Normal(rng, 0.0, angle_std));
}

}  // namespace

EpisodeNoiseState SampleEpisode(const RandomizationSpec& spec,
                                const env::EnvParams& base, Rng& rng) {
  EpisodeNoiseState ns;
  ns.params = base;

  if (spec.physical.enabled) {
    for (const auto& [path, dist] : spec.physical.params) {
      for (auto& ref : env::ResolveParamPath(ns.params, path)) {
        ApplyDistribution(*ref.value, dist, rng);
      }
    }
    ns.params.Validate();
  } else {
    // Paths are still checked so a typo is reported regardless of toggles.
    env::EnvParams scratch = base;
    for (const auto& entry : spec.physical.params) {
      env::ResolveParamPath(scratch, entry.first);
    }
  }

  if (spec.observation_noise.enabled) {
    const auto& o = spec.observation_noise;
    for (auto& v : ns.fingertip_offset) v = NormalVector3(rng, o.fingertip_correlated);
    ns.object_position_offset = NormalVector3(rng, o.object_position_correlated);
    ns.orientation_offset = RandomAxisRotation(o.orientation_correlated, rng);
    for (auto& v : ns.fingertip_marker_offset) {
      v = NormalVector3(rng, o.fingertip_marker);
    }
    ns.hand_base_marker_offset = NormalVector3(rng, o.hand_base_marker);
  }

  if (spec.action_noise.enabled) {
    const double sd = spec.action_noise.correlated_additive * kActionRange;
    for (int i = 0; i < kNumJoints; ++i) {
      ns.correlated_action_noise[i] = Normal(rng, 0.0, sd);
    }
  }

  if (spec.action_delay.enabled) {
    for (auto& flag : ns.delayed) {
      flag = Bernoulli(rng, spec.action_delay.probability);
    }
  }

  if (spec.timing.enabled) {
    ns.timing_rate = Uniform(rng, spec.timing.rate_min, spec.timing.rate_max);
  }

  if (spec.random_force.enabled) {
    ns.force_probability = LogUniform(rng, spec.random_force.probability_min,
                                      spec.random_force.probability_max);
  }

  for (int i = 0; i < kNumJoints; ++i) {
    ns.backlash_neg[i] = ns.params.actuators[i].backlash_neg;
    ns.backlash_pos[i] = ns.params.actuators[i].backlash_pos;
  }
  if (spec.backlash.enabled) {
    const double sd = spec.backlash.width_jitter;
    for (int i = 0; i < kNumJoints; ++i) {
      ns.backlash_neg[i] = std::max(0.0, ns.backlash_neg[i] + Normal(rng, 0.0, sd));
      ns.backlash_pos[i] = std::max(0.0, ns.backlash_pos[i] + Normal(rng, 0.0, sd));
    }
  }
  return ns;
}

Markers MisplacedMarkers(const Markers& fingertips,
                         const EpisodeNoiseState& noise) {
  Markers out;
  for (int i = 0; i < kNumJoints; ++i) {
    out[i] = fingertips[i] + noise.fingertip_marker_offset[i];
  }
  return out;
}

Markers MarkerDropout(const Markers& markers, EpisodeNoiseState& noise,
                      const MarkerDropoutLayer& layer, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw UsageError("marker dropout requires dt > 0");
  Markers out = markers;
  const double p = layer.rate * dt;
  for (int i = 0; i < kNumJoints; ++i) {
    if (Bernoulli(rng, p)) noise.dropout_remaining[i] = layer.duration;
    // Tolerance keeps an exact multiple of dt from masking one extra step.
    if (noise.dropout_remaining[i] > 1e-9) {
      if (noise.has_last_marker) out[i] = noise.last_marker[i];
      noise.dropout_remaining[i] -= dt;
    } else {
      noise.dropout_remaining[i] = 0.0;
    }
  }
  return out;
}

Markers MarkerOcclusion(const Markers& markers, const Markers& fingertips,
                        const Eigen::Vector3d& object_position,
                        double distance, const EpisodeNoiseState& noise) {
  Markers out = markers;
  if (distance <= 0.0 || !noise.has_last_marker) return out;
  for (int i = 0; i < kNumJoints; ++i) {
    bool occluded = (object_position - fingertips[i]).norm() < distance;
    for (int j = 0; j < kNumJoints && !occluded; ++j) {
      if (j != i && (fingertips[j] - fingertips[i]).norm() < distance) {
        occluded = true;
      }
    }
    if (occluded) out[i] = noise.last_marker[i];
  }
  return out;
}

void RememberMarkers(const Markers& markers, EpisodeNoiseState& noise) {
  noise.last_marker = markers;
  noise.has_last_marker = true;
}

env::SensorReadings PerturbObservation(const env::SensorReadings& readings,
                                       const EpisodeNoiseState& noise,
                                       const ObservationNoiseLayer& layer,
                                       Rng& rng) {
  env::SensorReadings out;
  for (int i = 0; i < kNumJoints; ++i) {
    out.fingertips[i] = readings.fingertips[i] + noise.fingertip_offset[i] +
                        NormalVector3(rng, layer.fingertip_uncorrelated);
  }
  out.object_position = readings.object_position -
                        noise.hand_base_marker_offset +
                        noise.object_position_offset +
                        NormalVector3(rng, layer.object_position_uncorrelated);
  out.relative_goal = CanonicalizeScalarPositive(
      RandomAxisRotation(layer.orientation_uncorrelated, rng) *
      noise.orientation_offset * readings.relative_goal);
  out.relative_goal.normalize();
  return out;
}

JointVector PerturbAction(const JointVector& action,
                          const EpisodeNoiseState& noise,
                          const ActionNoiseLayer& layer, Rng& rng) {
  JointVector out;
  const double sd_u = layer.uncorrelated_additive * kActionRange;
  const double sd_m = layer.uncorrelated_multiplicative;
  for (int i = 0; i < kNumJoints; ++i) {
    const double g_u = Normal(rng, 0.0, sd_u);
    const double g_m = Normal(rng, 0.0, sd_m);
    out[i] = action[i] * (1.0 + g_m) + g_u + noise.correlated_action_noise[i];
  }
  return out.cwiseMax(-1.0).cwiseMin(1.0);
}

JointVector DelayAction(const JointVector& action, EpisodeNoiseState& noise) {
  JointVector out = action;
  for (int i = 0; i < kNumJoints; ++i) {
    if (noise.delayed[i]) out[i] = noise.previous_action[i];
  }
  noise.previous_action = action;
  return out;
}

env::Substeps SampleSubsteps(const EpisodeNoiseState& noise, Rng& rng) {
  if (!(noise.timing_rate > 0.0)) {
    throw UsageError("timing rate not sampled for this episode");
  }
  env::Substeps s;
  for (auto& d : s) d = env::kNominalSubstep + Exponential(rng, noise.timing_rate);
  return s;
}

double Backlash(double a_in, double& slack, double width_neg,
                double width_pos, double dt) {
  if (a_in == 0.0) return 0.0;
  const double sign = a_in > 0.0 ? 1.0 : -1.0;
  const double width = a_in > 0.0 ? width_pos : width_neg;
  const double next = std::clamp(slack + a_in * width * dt, -1.0, 1.0);
  const double ratio =
      std::abs(sign - slack) / (std::abs(next - slack) + kBacklashEpsilon);
  const double alpha = 1.0 - std::clamp(ratio, 0.0, 1.0);
  slack = next;
  return alpha * a_in;
}

Eigen::Vector3d RandomForce(EpisodeNoiseState& noise, double mass,
                            double dt_step, const RandomForceLayer& layer,
                            Rng& rng) {
  if (!(mass > 0.0)) throw UsageError("random force requires mass > 0");
  noise.force *= std::pow(layer.decay, dt_step / layer.decay_period);
  if (Bernoulli(rng, noise.force_probability)) {
    noise.force = NormalVector3(rng, layer.acceleration_std * mass);
  }
  return noise.force;
}

}  // namespace dexsim::rand
