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

#include "dexsim/rand/randomized_env.h"

#include <numeric>

#include "dexsim/common/errors.h"

namespace dexsim::rand {

RandomizedEnv::RandomizedEnv(env::EnvParams base, RandomizationSpec spec)
    : base_(std::move(base)), spec_(std::move(spec)) {
  base_.Validate();
  spec_.Validate(base_);
  noise_.params = base_;
}

env::ObservationPair RandomizedEnv::Reset(std::uint64_t episode_seed) {
  for (std::uint64_t s = 0; s < kNumStreams; ++s) {
    streams_[s] = MakeRng(episode_seed, {s});
  }
  noise_ = SampleEpisode(spec_, base_, streams_[kPhysicalStream]);
  state_ = env::Reset(noise_.params, streams_[kEnvStream]);
  return Observe(env::kStepDuration);
}

env::ObservationPair RandomizedEnv::Observe(double dt) {
  const bool obs_noise = spec_.observation_noise.enabled;
  const bool dropout = spec_.marker_dropout.enabled;
  const bool occlusion = spec_.marker_occlusion.enabled;
  if (!obs_noise && !dropout && !occlusion) {
    return env::BuildObservations(state_, noise_.params);
  }
  env::SensorReadings readings = env::TrueReadings(state_, noise_.params);
  const Markers tips = readings.fingertips;
  Markers markers = MisplacedMarkers(tips, noise_);
  if (dropout) {
    markers = MarkerDropout(markers, noise_, spec_.marker_dropout, dt,
                            streams_[kDropoutStream]);
  }
  if (occlusion) {
    markers = MarkerOcclusion(markers, tips, state_.position,
                              spec_.marker_occlusion.distance, noise_);
  }
  RememberMarkers(markers, noise_);
  readings.fingertips = markers;
  if (obs_noise) {
    readings = PerturbObservation(readings, noise_, spec_.observation_noise,
                                  streams_[kObservationStream]);
  }
  return env::BuildObservations(state_, noise_.params, &readings);
}

RandomizedEnv::StepOutput RandomizedEnv::Step(const env::Bins& bins) {
  StepOutput out;
  JointVector a = env::BinsToAction(bins);
  if (spec_.action_noise.enabled) {
    a = PerturbAction(a, noise_, spec_.action_noise,
                      streams_[kActionNoiseStream]);
  }
  if (spec_.action_delay.enabled) a = DelayAction(a, noise_);

  out.substeps = spec_.timing.enabled
                     ? SampleSubsteps(noise_, streams_[kTimingStream])
                     : env::NominalSubsteps();
  const double dt_step =
      std::accumulate(out.substeps.begin(), out.substeps.end(), 0.0);

  if (spec_.backlash.enabled) {
    for (int i = 0; i < kNumJoints; ++i) {
      a[i] = Backlash(a[i], noise_.slack[i], noise_.backlash_neg[i],
                      noise_.backlash_pos[i], dt_step);
    }
  }

  env::StepInput input;
  input.action = a;
  input.substeps = out.substeps;
  if (spec_.random_force.enabled) {
    input.external_force =
        RandomForce(noise_, noise_.params.object_mass, dt_step,
                    spec_.random_force, streams_[kForceStream]);
  }
  out.executed_action = a;
  out.result = env::Step(state_, noise_.params, input, streams_[kEnvStream]);
  out.obs = Observe(dt_step);
  return out;
}

namespace {

void SaveVec3(BinaryWriter& w, const Eigen::Vector3d& v) {
  for (int i = 0; i < 3; ++i) w.F64(v[i]);
}
Eigen::Vector3d LoadVec3(BinaryReader& r) {
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v[i] = r.F64();
  return v;
}
void SaveJoints(BinaryWriter& w, const JointVector& v) {
  for (int i = 0; i < kNumJoints; ++i) w.F64(v[i]);
}
JointVector LoadJoints(BinaryReader& r) {
  JointVector v;
  for (int i = 0; i < kNumJoints; ++i) v[i] = r.F64();
  return v;
}
void SaveQuat(BinaryWriter& w, const Quaternion& q) {
  for (double c : ToWxyz(q)) w.F64(c);
}
Quaternion LoadQuat(BinaryReader& r) {
  std::array<double, 4> c;
  for (auto& x : c) x = r.F64();
  return FromWxyz(c);
}

void SaveParams(BinaryWriter& w, const env::EnvParams& p) {
  auto refs = env::ListParams(p);
  w.U64(refs.size());
  for (const auto& ref : refs) w.F64(*ref.value);
  for (const auto& axis : p.coupling_axis) SaveVec3(w, axis);
}
void LoadParams(BinaryReader& r, env::EnvParams& p) {
  auto refs = env::ListParams(p);
  if (r.U64() != refs.size()) throw FormatError("parameter count mismatch");
  for (auto& ref : refs) *ref.value = r.F64();
  for (auto& axis : p.coupling_axis) axis = LoadVec3(r);
}

void SaveState(BinaryWriter& w, const env::EnvState& s) {
  SaveJoints(w, s.q);
  SaveJoints(w, s.qdot);
  SaveVec3(w, s.position);
  SaveVec3(w, s.velocity);
  SaveQuat(w, s.orientation);
  SaveVec3(w, s.angular_velocity);
  SaveQuat(w, s.goal);
  w.I64(s.consecutive_goals);
  w.F64(s.time_since_goal);
  SaveJoints(w, s.smoothed_action);
  w.F64(s.contact_loss_time);
  w.F64(s.time);
}
env::EnvState LoadState(BinaryReader& r) {
  env::EnvState s;
  s.q = LoadJoints(r);
  s.qdot = LoadJoints(r);
  s.position = LoadVec3(r);
  s.velocity = LoadVec3(r);
  s.orientation = LoadQuat(r);
  s.angular_velocity = LoadVec3(r);
  s.goal = LoadQuat(r);
  s.consecutive_goals = static_cast<int>(r.I64());
  s.time_since_goal = r.F64();
  s.smoothed_action = LoadJoints(r);
  s.contact_loss_time = r.F64();
  s.time = r.F64();
  return s;
}

}  // namespace

void RandomizedEnv::Save(BinaryWriter& w) const {
  SaveParams(w, noise_.params);
  for (const auto& v : noise_.fingertip_offset) SaveVec3(w, v);
  SaveVec3(w, noise_.object_position_offset);
  SaveQuat(w, noise_.orientation_offset);
  for (const auto& v : noise_.fingertip_marker_offset) SaveVec3(w, v);
  SaveVec3(w, noise_.hand_base_marker_offset);
  SaveJoints(w, noise_.correlated_action_noise);
  for (bool d : noise_.delayed) w.U64(d ? 1 : 0);
  SaveJoints(w, noise_.previous_action);
  SaveJoints(w, noise_.slack);
  SaveJoints(w, noise_.backlash_neg);
  SaveJoints(w, noise_.backlash_pos);
  w.F64(noise_.timing_rate);
  w.F64(noise_.force_probability);
  SaveVec3(w, noise_.force);
  for (double d : noise_.dropout_remaining) w.F64(d);
  for (const auto& v : noise_.last_marker) SaveVec3(w, v);
  w.U64(noise_.has_last_marker ? 1 : 0);
  SaveState(w, state_);
  for (const auto& rng : streams_) w.Str(SaveRngState(rng));
}

void RandomizedEnv::Load(BinaryReader& r) {
  LoadParams(r, noise_.params);
  for (auto& v : noise_.fingertip_offset) v = LoadVec3(r);
  noise_.object_position_offset = LoadVec3(r);
  noise_.orientation_offset = LoadQuat(r);
  for (auto& v : noise_.fingertip_marker_offset) v = LoadVec3(r);
  noise_.hand_base_marker_offset = LoadVec3(r);
  noise_.correlated_action_noise = LoadJoints(r);
  for (auto& d : noise_.delayed) d = r.U64() != 0;
  noise_.previous_action = LoadJoints(r);
  noise_.slack = LoadJoints(r);
  noise_.backlash_neg = LoadJoints(r);
  noise_.backlash_pos = LoadJoints(r);
  noise_.timing_rate = r.F64();
  noise_.force_probability = r.F64();
  noise_.force = LoadVec3(r);
  for (auto& d : noise_.dropout_remaining) d = r.F64();
  for (auto& v : noise_.last_marker) v = LoadVec3(r);
  noise_.has_last_marker = r.U64() != 0;
  state_ = LoadState(r);
  for (auto& rng : streams_) rng = LoadRngState(r.Str());
}

}  // namespace dexsim::rand
