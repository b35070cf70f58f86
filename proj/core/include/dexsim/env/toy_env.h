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

#ifndef DEXSIM_ENV_TOY_ENV_H_
#define DEXSIM_ENV_TOY_ENV_H_

// A five-finger, single-DOF-per-finger stand-in for an in-hand reorientation
// task. Fingertips hold a free object against a centering spring; each
// fingertip in contact twists the object about its coupling axis in
// proportion to the finger's deflection from equilibrium.

#include <array>
#include <string>

#include <Eigen/Core>

#include "dexsim/common/quaternion.h"
#include "dexsim/common/rng.h"
#include "dexsim/env/env_params.h"

namespace dexsim::env {

inline constexpr int kSubsteps = 10;
inline constexpr double kNominalSubstep = 0.008;  // s
inline constexpr double kStepDuration = kSubsteps * kNominalSubstep;
inline constexpr double kGoalTolerance = 0.4;     // rad
inline constexpr double kGoalBonus = 5.0;
inline constexpr double kDropPenalty = 20.0;
inline constexpr int kMaxConsecutiveGoals = 50;
inline constexpr double kGoalTimeout = 8.0;       // s
inline constexpr double kActionSmoothing = 0.3;   // weight of the new action
inline constexpr int kWarmupSteps = 100;
inline constexpr int kMaxResetAttempts = 100;
inline constexpr double kJointLimitGainFactor = 20.0;

using Substeps = std::array<double, kSubsteps>;
using Bins = std::array<int, kNumJoints>;

Substeps NominalSubsteps();

enum class DoneReason { kNone, kGoalLimit, kTimeout, kDrop };
std::string ToString(DoneReason reason);
DoneReason DoneReasonFromString(const std::string& text);

struct EnvState {
  JointVector q = JointVector::Zero();
  JointVector qdot = JointVector::Zero();
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Quaternion orientation = Quaternion::Identity();
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();
  Quaternion goal = Quaternion::Identity();
  int consecutive_goals = 0;
  double time_since_goal = 0.0;     // s
  JointVector smoothed_action = JointVector::Zero();
  double contact_loss_time = 0.0;   // s with fewer than two contacts
  double time = 0.0;                // s since reset
};

bool BitwiseEqual(const EnvState& a, const EnvState& b);

struct StepInput {
  JointVector action = JointVector::Zero();  // unitless, clamped to [-1, 1]
  Substeps substeps = NominalSubsteps();
  Eigen::Vector3d external_force = Eigen::Vector3d::Zero();  // N
};

struct StepResult {
  double reward = 0.0;
  bool done = false;
  DoneReason reason = DoneReason::kNone;
  bool goal_achieved = false;
  bool dropped = false;
  double distance_before = 0.0;
  double distance_after = 0.0;
  double duration = 0.0;  // s
};

// (d_t - d_t1) + 5*[achieved] - 20*[dropped].
double Reward(double d_t, double d_t1, bool dropped, bool achieved);

// Center of bin k of 11 equal bins over [-1, 1]: -1 + (2k + 1) / 11.
double BinCenter(int bin);
JointVector BinsToAction(const Bins& bins);

std::array<Eigen::Vector3d, kNumJoints> FingertipPositions(
    const JointVector& q, const EnvParams& params);
int CountContacts(const JointVector& q, const Eigen::Vector3d& position,
                  const EnvParams& params);

// Resting height of the object on the centering spring.
Eigen::Vector3d RestPosition(const EnvParams& params);

// Uniform random goal; also restarts the goal timer.
Quaternion SampleGoal(EnvState& state, Rng& rng);

// Warm-started initial state. Throws InitializationError when every one of
// kMaxResetAttempts warm-ups drops the object.
EnvState Reset(const EnvParams& params, Rng& rng);

// Advances the dynamics only (no goals, rewards or termination).
// Throws NumericalError carrying the substep index on blowup.
void Integrate(EnvState& state, const EnvParams& params,
               const StepInput& input);

// Full environment step. `rng` is used only to draw the next goal.
StepResult Step(EnvState& state, const EnvParams& params,
                const StepInput& input, Rng& rng);

// Value-like environment instance: parameters, state and its own stream.
class ToyEnv {
 public:
  ToyEnv(EnvParams params, Rng rng);

  const EnvState& Reset();
  StepResult Step(const StepInput& input);
  StepResult StepBins(const Bins& bins, const Substeps& substeps);

  const EnvState& state() const { return state_; }
  EnvState& mutable_state() { return state_; }
  const EnvParams& params() const { return params_; }
  void set_params(const EnvParams& params);
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

 private:
  EnvParams params_;
  Rng rng_;
  EnvState state_;
};

}  // namespace dexsim::env

#endif  // DEXSIM_ENV_TOY_ENV_H_
