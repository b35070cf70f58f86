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

#include "dexsim/env/toy_env.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dexsim/common/errors.h"

namespace dexsim::env {

Substeps NominalSubsteps() {
  Substeps s;
  s.fill(kNominalSubstep);
  return s;
}

std::string ToString(DoneReason reason) {
  switch (reason) {
    case DoneReason::kNone: return "none";
    case DoneReason::kGoalLimit: return "goal-limit";
    case DoneReason::kTimeout: return "timeout";
    case DoneReason::kDrop: return "drop";
  }
  return "none";
}

DoneReason DoneReasonFromString(const std::string& text) {
  if (text == "none") return DoneReason::kNone;
  if (text == "goal-limit") return DoneReason::kGoalLimit;
  if (text == "timeout") return DoneReason::kTimeout;
  if (text == "drop") return DoneReason::kDrop;
  throw FormatError("unknown done reason: " + text);
}

namespace {

template <typename T>
bool SameBits(const T& a, const T& b) {
  return std::memcmp(&a, &b, sizeof(T)) == 0;
}

template <typename Derived>
bool SameBitsDense(const Eigen::MatrixBase<Derived>& a,
                   const Eigen::MatrixBase<Derived>& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!SameBits(a.derived().data()[i], b.derived().data()[i])) return false;
  }
  return true;
}

bool SameBitsQuat(const Quaternion& a, const Quaternion& b) {
  return SameBitsDense(a.coeffs(), b.coeffs());
}

}  // namespace

bool BitwiseEqual(const EnvState& a, const EnvState& b) {
  return SameBitsDense(a.q, b.q) && SameBitsDense(a.qdot, b.qdot) &&
         SameBitsDense(a.position, b.position) &&
         SameBitsDense(a.velocity, b.velocity) &&
         SameBitsQuat(a.orientation, b.orientation) &&
         SameBitsDense(a.angular_velocity, b.angular_velocity) &&
         SameBitsQuat(a.goal, b.goal) &&
         a.consecutive_goals == b.consecutive_goals &&
         SameBits(a.time_since_goal, b.time_since_goal) &&
         SameBitsDense(a.smoothed_action, b.smoothed_action) &&
         SameBits(a.contact_loss_time, b.contact_loss_time) &&
         SameBits(a.time, b.time);
}

double Reward(double d_t, double d_t1, bool dropped, bool achieved) {
  double r = d_t - d_t1;
  if (achieved) r += kGoalBonus;
  if (dropped) r -= kDropPenalty;
  return r;
}

double BinCenter(int bin) {
  if (bin < 0 || bin >= kNumBins) {
    throw UsageError("action bin out of range: " + std::to_string(bin));
  }
  return -1.0 + (2.0 * bin + 1.0) / kNumBins;
}

JointVector BinsToAction(const Bins& bins) {
  JointVector a;
  for (int i = 0; i < kNumJoints; ++i) a[i] = BinCenter(bins[i]);
  return a;
}

std::array<Eigen::Vector3d, kNumJoints> FingertipPositions(
    const JointVector& q, const EnvParams& params) {
  std::array<Eigen::Vector3d, kNumJoints> tips;
  const Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
  for (int i = 0; i < kNumJoints; ++i) {
    Eigen::Vector3d inward = params.palm_center - params.finger_base[i];
    inward.z() = 0.0;
    if (inward.norm() < 1e-12) inward = Eigen::Vector3d::UnitX();
    inward.normalize();
    Eigen::Vector3d side = inward.cross(up).normalized();
    tips[i] = params.finger_base[i] +
              params.finger_length *
                  (std::cos(q[i]) * inward + std::sin(q[i]) * side);
  }
  return tips;
}

int CountContacts(const JointVector& q, const Eigen::Vector3d& position,
                  const EnvParams& params) {
  auto tips = FingertipPositions(q, params);
  int n = 0;
  for (const auto& tip : tips) {
    if ((tip - position).norm() < params.contact_radius) ++n;
  }
  return n;
}

Eigen::Vector3d RestPosition(const EnvParams& params) {
  Eigen::Vector3d p = params.palm_center;
  if (params.centering_stiffness > 0.0) {
    p.z() -= params.object_mass * params.gravity / params.centering_stiffness;
  }
  return p;
}

Quaternion SampleGoal(EnvState& state, Rng& rng) {
  state.goal = UniformRandomQuaternion(rng);
  state.time_since_goal = 0.0;
  return state.goal;
}

namespace {

double Sign(double x) { return (x > 0.0) - (x < 0.0); }

struct JointLaw {
  double q, v, target, h;
  double inertia, gain, force_range, stiffness, equilibrium, damping;
  double friction_force;  // explicit, already signed
  double lo, hi, limit_gain;
};

// Linear form A*delta + B of the backward-Euler residual on the piece that
// contains q + delta_probe.
void PieceAt(const JointLaw& j, double delta_probe, double& a, double& b) {
  const double x = j.q + delta_probe;
  a = j.inertia / (j.h * j.h) + j.damping / j.h + j.stiffness;
  b = -j.inertia * j.v / j.h + j.friction_force +
      j.stiffness * (j.q - j.equilibrium);
  const double u = j.gain * (j.target - x);
  if (u > j.force_range) {
    b -= j.force_range;
  } else if (u < -j.force_range) {
    b += j.force_range;
  } else {
    a += j.gain;
    b -= j.gain * (j.target - j.q);
  }
  if (x > j.hi) {
    a += j.limit_gain;
    b += j.limit_gain * (j.q - j.hi);
  } else if (x < j.lo) {
    a += j.limit_gain;
    b += j.limit_gain * (j.q - j.lo);
  }
}

double Residual(const JointLaw& j, double delta) {
  double a, b;
  PieceAt(j, delta, a, b);
  return a * delta + b;
}

// Exact root of the monotone piecewise-linear backward-Euler residual.
double SolveJoint(const JointLaw& j) {
  std::array<double, 4> bp = {j.target - j.force_range / j.gain - j.q,
                              j.target + j.force_range / j.gain - j.q,
                              j.lo - j.q, j.hi - j.q};
  std::sort(bp.begin(), bp.end());
  double probe = bp.back() + 1.0;
  for (std::size_t k = 0; k < bp.size(); ++k) {
    if (Residual(j, bp[k]) >= 0.0) {
      probe = (k == 0) ? bp[0] - 1.0 : 0.5 * (bp[k - 1] + bp[k]);
      break;
    }
  }
  double a, b;
  PieceAt(j, probe, a, b);
  return -b / a;
}

bool AllFinite(const EnvState& s) {
  return s.q.allFinite() && s.qdot.allFinite() && s.position.allFinite() &&
         s.velocity.allFinite() && s.orientation.coeffs().allFinite() &&
         s.angular_velocity.allFinite();
}

}  // namespace

void Integrate(EnvState& state, const EnvParams& params,
               const StepInput& input) {
  const JointVector action = input.action.cwiseMax(-1.0).cwiseMin(1.0);
  state.smoothed_action = (1.0 - kActionSmoothing) * state.smoothed_action +
                          kActionSmoothing * action;
  const JointVector q_ref = state.q;
  JointVector target;
  for (int i = 0; i < kNumJoints; ++i) {
    target[i] =
        q_ref[i] + state.smoothed_action[i] * ActionScale(params.joints[i]);
  }

  for (int k = 0; k < kSubsteps; ++k) {
    const double h = input.substeps[k];
    if (!(h > 0.0)) {
      throw UsageError("substep durations must be positive");
    }
    const int contacts = CountContacts(state.q, state.position, params);

    // Object forces use the start-of-substep configuration.
    Eigen::Vector3d force = input.external_force -
                            params.object_linear_damping * state.velocity;
    force.z() -= params.object_mass * params.gravity;
    if (contacts >= 2) {
      force += params.centering_stiffness *
               (params.palm_center - state.position);
    }
    Eigen::Vector3d torque =
        -params.object_angular_damping * state.angular_velocity;
    if (params.coupling_gain != 0.0) {
      auto tips = FingertipPositions(state.q, params);
      for (int i = 0; i < kNumJoints; ++i) {
        if ((tips[i] - state.position).norm() < params.contact_radius) {
          torque += params.coupling_gain *
                    (state.q[i] - params.joints[i].equilibrium) *
                    params.coupling_axis[i];
        }
      }
    }

    for (int i = 0; i < kNumJoints; ++i) {
      const auto& jp = params.joints[i];
      const auto& ap = params.actuators[i];
      JointLaw law{state.q[i],
                   state.qdot[i],
                   target[i],
                   h,
                   params.joint_inertia,
                   ap.gain,
                   ap.force_range,
                   jp.stiffness,
                   jp.equilibrium,
                   jp.damping,
                   jp.friction * Sign(state.qdot[i]),
                   jp.range_min,
                   jp.range_max,
                   kJointLimitGainFactor * ap.gain};
      const double delta = SolveJoint(law);
      state.q[i] += delta;
      state.qdot[i] = delta / h;
    }

    state.velocity += h / params.object_mass * force;
    state.position += h * state.velocity;
    state.angular_velocity += h / params.object_inertia * torque;
    const double omega = state.angular_velocity.norm();
    if (omega > 0.0) {
      state.orientation =
          Quaternion(Eigen::AngleAxisd(omega * h,
                                       state.angular_velocity / omega)) *
          state.orientation;
    }
    state.orientation.normalize();
    state.contact_loss_time = contacts >= 2 ? 0.0 : state.contact_loss_time + h;
    state.time += h;

    if (!AllFinite(state)) {
      throw NumericalError(
          "non-finite state after substep " + std::to_string(k), k);
    }
  }
}

StepResult Step(EnvState& state, const EnvParams& params,
                const StepInput& input, Rng& rng) {
  StepResult result;
  result.distance_before = GoalDistance(state.goal, state.orientation);
  const double t0 = state.time;
  Integrate(state, params, input);
  result.duration = state.time - t0;
  result.distance_after = GoalDistance(state.goal, state.orientation);
  result.dropped = state.position.z() < params.drop_height;
  result.goal_achieved = result.distance_after < kGoalTolerance;
  result.reward = Reward(result.distance_before, result.distance_after,
                         result.dropped, result.goal_achieved);

  if (result.goal_achieved) ++state.consecutive_goals;
  if (result.dropped) {
    result.done = true;
    result.reason = DoneReason::kDrop;
  } else if (result.goal_achieved) {
    if (state.consecutive_goals >= kMaxConsecutiveGoals) {
      result.done = true;
      result.reason = DoneReason::kGoalLimit;
    } else {
      SampleGoal(state, rng);
    }
  } else {
    state.time_since_goal += result.duration;
    // Slack absorbs the rounding of summed 8 ms substeps.
    if (state.time_since_goal > kGoalTimeout + 1e-9) {
      result.done = true;
      result.reason = DoneReason::kTimeout;
    }
  }
  return result;
}

EnvState Reset(const EnvParams& params, Rng& rng) {
  params.Validate();
  for (int attempt = 0; attempt < kMaxResetAttempts; ++attempt) {
    EnvState s;
    for (int i = 0; i < kNumJoints; ++i) s.q[i] = params.joints[i].equilibrium;
    s.position = RestPosition(params);
    s.orientation = UniformRandomQuaternion(rng);
    bool dropped = false;
    for (int t = 0; t < kWarmupSteps && !dropped; ++t) {
      StepInput input;
      for (int i = 0; i < kNumJoints; ++i) {
        input.action[i] = BinCenter(UniformInt(rng, 0, kNumBins - 1));
      }
      Integrate(s, params, input);
      dropped = s.position.z() < params.drop_height;
    }
    if (dropped) continue;
    s.time = 0.0;
    s.consecutive_goals = 0;
    s.contact_loss_time = 0.0;
    SampleGoal(s, rng);
    return s;
  }
  throw InitializationError("object dropped during every warm-up attempt (" +
                            std::to_string(kMaxResetAttempts) + ")");
}

ToyEnv::ToyEnv(EnvParams params, Rng rng)
    : params_(std::move(params)), rng_(std::move(rng)) {
  params_.Validate();
}

const EnvState& ToyEnv::Reset() {
  state_ = env::Reset(params_, rng_);
  return state_;
}

StepResult ToyEnv::Step(const StepInput& input) {
  return env::Step(state_, params_, input, rng_);
}

StepResult ToyEnv::StepBins(const Bins& bins, const Substeps& substeps) {
  StepInput input;
  input.action = BinsToAction(bins);
  input.substeps = substeps;
  return Step(input);
}

void ToyEnv::set_params(const EnvParams& params) {
  params.Validate();
  params_ = params;
}

}  // namespace dexsim::env
