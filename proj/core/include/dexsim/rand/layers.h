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

#ifndef DEXSIM_RAND_LAYERS_H_
#define DEXSIM_RAND_LAYERS_H_

#include <array>

#include <Eigen/Core>

#include "dexsim/common/quaternion.h"
#include "dexsim/common/rng.h"
#include "dexsim/env/env_params.h"
#include "dexsim/env/observations.h"
#include "dexsim/env/toy_env.h"
#include "dexsim/rand/randomization_spec.h"

namespace dexsim::rand {

using env::JointVector;
using env::kNumJoints;
using Markers = std::array<Eigen::Vector3d, kNumJoints>;

inline constexpr double kBacklashEpsilon = 1e-12;
inline constexpr double kActionRange = 2.0;

// Everything sampled at episode start, plus the per-step memory the layers
// carry (slack, delay buffer, decaying force, frozen marker readings).
struct EpisodeNoiseState {
  env::EnvParams params;

  Markers fingertip_offset;  // correlated, added to fingertip readings
  Eigen::Vector3d object_position_offset = Eigen::Vector3d::Zero();
  Quaternion orientation_offset = Quaternion::Identity();
  Markers fingertip_marker_offset;  // marker misplacement
  Eigen::Vector3d hand_base_marker_offset = Eigen::Vector3d::Zero();

  JointVector correlated_action_noise = JointVector::Zero();
  std::array<bool, kNumJoints> delayed{};
  JointVector previous_action = JointVector::Zero();

  JointVector slack = JointVector::Zero();
  JointVector backlash_neg = JointVector::Zero();
  JointVector backlash_pos = JointVector::Zero();

  double timing_rate = 0.0;        // lambda, 1/s
  double force_probability = 0.0;  // p
  Eigen::Vector3d force = Eigen::Vector3d::Zero();  // N

  std::array<double, kNumJoints> dropout_remaining{};  // s
  Markers last_marker;
  bool has_last_marker = false;

  EpisodeNoiseState();
};

// Draws the per-episode quantities from their own stream; disabled layers
// leave their fields at the neutral value. Unknown parameter paths raise
// ConfigError.
EpisodeNoiseState SampleEpisode(const RandomizationSpec& spec,
                                const env::EnvParams& base, Rng& rng);

// Marker readings: true fingertips shifted by the misplacement offsets.
Markers MisplacedMarkers(const Markers& fingertips,
                         const EpisodeNoiseState& noise);

// Begins a `duration` mask per marker with probability rate*dt; masked
// markers repeat their last available reading.
Markers MarkerDropout(const Markers& markers, EpisodeNoiseState& noise,
                      const MarkerDropoutLayer& layer, double dt, Rng& rng);

// A marker is occluded when another fingertip or the object center lies
// within `distance` of its fingertip; occluded markers repeat their last
// available reading.
Markers MarkerOcclusion(const Markers& markers, const Markers& fingertips,
                        const Eigen::Vector3d& object_position,
                        double distance, const EpisodeNoiseState& noise);

// Records `markers` as the last available readings.
void RememberMarkers(const Markers& markers, EpisodeNoiseState& noise);

// Adds correlated + fresh uncorrelated noise to the policy readings. The
// fingertips in `readings` are expected to be marker-derived already.
env::SensorReadings PerturbObservation(const env::SensorReadings& readings,
                                       const EpisodeNoiseState& noise,
                                       const ObservationNoiseLayer& layer,
                                       Rng& rng);

// a*(1 + g_m) + g_u + g_c, clamped to [-1, 1].
JointVector PerturbAction(const JointVector& action,
                          const EpisodeNoiseState& noise,
                          const ActionNoiseLayer& layer, Rng& rng);

// Flagged coordinates return the previous step's input (zero at the first
// step); the buffer always records the current input.
JointVector DelayAction(const JointVector& action, EpisodeNoiseState& noise);

// Ten substep durations: 8 ms + Exp(lambda).
env::Substeps SampleSubsteps(const EpisodeNoiseState& noise, Rng& rng);

// Tendon-slack model applied to one actuator. Updates `slack` in place.
double Backlash(double a_in, double& slack, double width_neg,
                double width_pos, double dt);

// Decays the stored force by decay^(dt/period), then with probability p
// replaces it by a fresh N(0, (accel * mass)^2) draw per coordinate.
Eigen::Vector3d RandomForce(EpisodeNoiseState& noise, double mass,
                            double dt_step, const RandomForceLayer& layer,
                            Rng& rng);

}  // namespace dexsim::rand

#endif  // DEXSIM_RAND_LAYERS_H_
