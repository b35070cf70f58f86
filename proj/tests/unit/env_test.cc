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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "dexsim/common/errors.h"
#include "dexsim/common/quaternion.h"
#include "dexsim/common/rng.h"
#include "dexsim/env/env_params.h"
#include "dexsim/env/observations.h"
#include "dexsim/env/toy_env.h"
#include "dexsim/env/trajectory_io.h"

namespace dexsim::env {
namespace {

StepInput RandomInput(Rng& rng) {
  StepInput in;
  for (int i = 0; i < kNumJoints; ++i) {
    in.action[i] = BinCenter(UniformInt(rng, 0, kNumBins - 1));
  }
  return in;
}

TEST(RewardTest, MatchesWorkedExamples) {
  EXPECT_NEAR(Reward(0.5, 0.3, false, true), 5.2, 1e-15);
  EXPECT_EQ(Reward(0.7, 0.7, false, false), 0.0);
  EXPECT_NEAR(Reward(1.0, 1.2, true, false), -20.2, 1e-15);
}

TEST(ActionTest, BinCentersAreSymmetric) {
  EXPECT_NEAR(BinCenter(0), -1.0 + 1.0 / 11.0, 1e-15);
  EXPECT_EQ(BinCenter(5), 0.0);
  for (int k = 0; k < kNumBins; ++k) {
    EXPECT_NEAR(BinCenter(k), -BinCenter(kNumBins - 1 - k), 1e-15);
    EXPECT_GT(BinCenter(k), -1.0);
    EXPECT_LT(BinCenter(k), 1.0);
  }
}

TEST(ParamsTest, DefaultsValidateAndPathsResolve) {
  EnvParams p = EnvParams::Defaults();
  EXPECT_NO_THROW(p.Validate());
  EXPECT_EQ(ResolveParamPath(p, "joint.*.damping").size(), 5u);
  EXPECT_EQ(ResolveParamPath(p, "object.mass").size(), 1u);
  EXPECT_THROW(ResolveParamPath(p, "joint.*.nonsense"), ConfigError);
  ParamByName(p, "joint.3.damping") = 0.25;
  EXPECT_EQ(p.joints[3].damping, 0.25);
}

TEST(ParamsTest, ValidateRejectsBadValues) {
  EnvParams p = EnvParams::Defaults();
  p.joints[1].range_min = p.joints[1].range_max;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = EnvParams::Defaults();
  p.object_mass = 0.0;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = EnvParams::Defaults();
  p.actuators[0].backlash_pos = -1.0;
  EXPECT_THROW(p.Validate(), ConfigError);
}

TEST(ResetTest, FixedSeedIsReproducible) {
  const EnvParams p = EnvParams::Defaults();
  Rng a = MakeRng(9, {});
  Rng b = MakeRng(9, {});
  EXPECT_TRUE(BitwiseEqual(Reset(p, a), Reset(p, b)));
}

TEST(ResetTest, ZeroCouplingStillSucceeds) {
  EnvParams p = EnvParams::Defaults();
  p.coupling_gain = 0.0;
  Rng rng = MakeRng(10, {});
  const EnvState s = Reset(p, rng);
  EXPECT_GT(s.position.z(), p.drop_height);
  EXPECT_EQ(s.consecutive_goals, 0);
  EXPECT_EQ(s.time_since_goal, 0.0);
}

TEST(ResetTest, DegenerateParamsFailInitialization) {
  EnvParams p = EnvParams::Defaults();
  p.centering_stiffness = 0.0;  // nothing holds the object up
  Rng rng = MakeRng(11, {});
  EXPECT_THROW(Reset(p, rng), InitializationError);
}

// Rotation angle of a uniform random rotation has density (1 - cos t) / pi.
TEST(ResetTest, GoalAnglesFollowUniformRotationDensity) {
  const EnvParams p = EnvParams::Defaults();
  Rng rng = MakeRng(12, {});
  std::vector<double> angles;
  for (int i = 0; i < 1000; ++i) {
    const EnvState s = Reset(p, rng);
    angles.push_back(GoalDistance(Quaternion::Identity(), s.goal));
  }
  std::sort(angles.begin(), angles.end());
  double d = 0.0;
  const double n = angles.size();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double f = (angles[i] - std::sin(angles[i])) / M_PI;
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  EXPECT_LT(d, 1.628 / std::sqrt(n));
}

TEST(GoalTest, SampleGoalMomentsAndNorm) {
  Rng rng = MakeRng(13, {});
  EnvState s;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    s.time_since_goal = 3.0;
    const Quaternion q = SampleGoal(s, rng);
    ASSERT_NEAR(q.norm(), 1.0, 1e-12);
    ASSERT_GE(q.w(), 0.0);
    ASSERT_EQ(s.time_since_goal, 0.0);
    mean += q.vec();
  }
  mean /= n;
  EXPECT_LT(mean.cwiseAbs().maxCoeff(), 0.02);
}

TEST(StepTest, ZeroActionAtRestOnlyAdvancesGoalTimer) {
  EnvParams p = EnvParams::Defaults();
  EnvState s;
  for (int i = 0; i < kNumJoints; ++i) s.q[i] = p.joints[i].equilibrium;
  s.position = RestPosition(p);
  s.goal = AxisAngle(Eigen::Vector3d::UnitX(), 2.0);
  ASSERT_GE(CountContacts(s.q, s.position, p), 2);
  EnvState before = s;
  Rng rng = MakeRng(14, {});
  const StepResult r = Step(s, p, StepInput{}, rng);
  EXPECT_FALSE(r.done);
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_EQ(s.q, before.q);
  EXPECT_EQ(s.qdot, before.qdot);
  EXPECT_LT((s.position - before.position).norm(), 1e-12);
  EXPECT_LT(s.velocity.norm(), 1e-12);
  EXPECT_EQ(s.orientation.coeffs(), before.orientation.coeffs());
  EXPECT_NEAR(s.time_since_goal, kStepDuration, 1e-15);
}

// Semi-implicit Euler free fall, evaluated independently of the simulator.
TEST(StepTest, UnsupportedObjectFallsOnSchedule) {
  EnvParams p = EnvParams::Defaults();
  p.coupling_gain = 0.0;
  p.centering_stiffness = 0.0;
  p.object_linear_damping = 0.0;
  EnvState s;
  for (int i = 0; i < kNumJoints; ++i) s.q[i] = p.joints[i].equilibrium;
  s.position = p.palm_center;
  s.goal = AxisAngle(Eigen::Vector3d::UnitX(), 2.0);
  double z = s.position.z(), v = 0.0;
  int substeps = 0;
  while (z >= p.drop_height) {
    v -= p.gravity * kNominalSubstep;
    z += v * kNominalSubstep;
    ++substeps;
  }
  const int expected_steps = (substeps + kSubsteps - 1) / kSubsteps;
  Rng rng = MakeRng(15, {});
  int steps = 0;
  StepResult r;
  while (!r.done && steps < 1000) {
    r = Step(s, p, StepInput{}, rng);
    ++steps;
  }
  EXPECT_EQ(steps, expected_steps);
  EXPECT_EQ(r.reason, DoneReason::kDrop);
  EXPECT_NEAR(r.reward, r.distance_before - r.distance_after - 20.0, 1e-12);
}

TEST(StepTest, BitwiseDeterministic) {
  const EnvParams p = EnvParams::Defaults();
  auto run = [&] {
    Rng rng = MakeRng(16, {});
    EnvState s = Reset(p, rng);
    Rng actions = MakeRng(17, {});
    std::vector<EnvState> states;
    for (int t = 0; t < 200; ++t) {
      const StepResult r = Step(s, p, RandomInput(actions), rng);
      states.push_back(s);
      if (r.done) s = Reset(p, rng);
    }
    return states;
  };
  const auto a = run();
  const auto b = run();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_TRUE(BitwiseEqual(a[i], b[i])) << "step " << i;
  }
}

TEST(StepTest, QuaternionNormAndJointBoundsHoldOverLongRollout) {
  const EnvParams p = EnvParams::Defaults();
  Rng rng = MakeRng(18, {});
  EnvState s = Reset(p, rng);
  for (int t = 0; t < 100000; ++t) {
    StepInput in = RandomInput(rng);
    Integrate(s, p, in);
    ASSERT_NEAR(s.orientation.norm(), 1.0, 1e-6);
    for (int i = 0; i < kNumJoints; ++i) {
      ASSERT_GE(s.q[i], p.joints[i].range_min - 0.1);
      ASSERT_LE(s.q[i], p.joints[i].range_max + 0.1);
    }
    if (s.position.z() < p.drop_height) s = Reset(p, rng);
  }
}

TEST(StepTest, JointEnergyNonIncreasingWithoutDrive) {
  EnvParams p = EnvParams::Defaults();
  p.coupling_gain = 0.0;
  p.gravity = 0.0;
  for (auto& j : p.joints) {
    j.friction = 0.0;
    j.damping = 0.0;
    j.stiffness = 0.2;
  }
  Rng rng = MakeRng(19, {});
  EnvState s;
  for (int i = 0; i < kNumJoints; ++i) {
    s.q[i] = Uniform(rng, -0.65, 0.65);
    s.qdot[i] = Normal(rng, 0.0, 2.0);
  }
  s.position = RestPosition(p);
  auto energy = [&](const EnvState& st) {
    double e = 0.0;
    for (int i = 0; i < kNumJoints; ++i) {
      const auto& j = p.joints[i];
      e += 0.5 * p.joint_inertia * st.qdot[i] * st.qdot[i];
      e += 0.5 * j.stiffness * std::pow(st.q[i] - j.equilibrium, 2);
      const double over = std::max(0.0, st.q[i] - j.range_max) +
                          std::max(0.0, j.range_min - st.q[i]);
      e += 0.5 * kJointLimitGainFactor * p.actuators[i].gain * over * over;
    }
    return e;
  };
  double e = energy(s);
  for (int t = 0; t < 1000; ++t) {
    Integrate(s, p, StepInput{});
    const double next = energy(s);
    ASSERT_LE(next, e * (1.0 + 1e-8)) << "step " << t;
    e = next;
  }
}

TEST(StepTest, NonFiniteStateReportsSubstep) {
  const EnvParams p = EnvParams::Defaults();
  Rng rng = MakeRng(20, {});
  EnvState s = Reset(p, rng);
  StepInput in;
  in.external_force = Eigen::Vector3d(INFINITY, 0.0, 0.0);
  try {
    Integrate(s, p, in);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.index(), 0);
  }
}

TEST(StepTest, DoneReasonSetIffDone) {
  const EnvParams p = EnvParams::Defaults();
  Rng rng = MakeRng(21, {});
  EnvState s = Reset(p, rng);
  for (int t = 0; t < 3000; ++t) {
    const StepResult r = Step(s, p, RandomInput(rng), rng);
    ASSERT_TRUE(std::isfinite(r.reward));
    ASSERT_EQ(r.done, r.reason != DoneReason::kNone);
    if (r.done) s = Reset(p, rng);
  }
}

TEST(ObservationTest, NoiseFreePolicyViewMatchesValueView) {
  const EnvParams p = EnvParams::Defaults();
  Rng rng = MakeRng(22, {});
  const EnvState s = Reset(p, rng);
  const ObservationPair o = BuildObservations(s, p);
  ASSERT_EQ(o.policy.size(), kPolicyObsSize);
  ASSERT_EQ(o.value.size(), kValueObsSize);
  EXPECT_EQ(o.policy.head(4), o.value.head(4));
  EXPECT_EQ(o.policy.segment(4, 18), o.value.segment(8, 18));
}

TEST(ObservationTest, RelativeGoalIsIdentityAtGoal) {
  const EnvParams p = EnvParams::Defaults();
  Rng rng = MakeRng(23, {});
  EnvState s = Reset(p, rng);
  s.goal = s.orientation;
  const ObservationPair o = BuildObservations(s, p);
  EXPECT_NEAR(o.policy[0], 1.0, 1e-12);
  EXPECT_LT(o.policy.segment(1, 3).norm(), 1e-12);
}

TEST(ObservationTest, NoisyReadingsOnlyTouchPolicyView) {
  const EnvParams p = EnvParams::Defaults();
  Rng rng = MakeRng(24, {});
  const EnvState s = Reset(p, rng);
  SensorReadings noisy = TrueReadings(s, p);
  noisy.object_position.x() += 0.01;
  const ObservationPair clean = BuildObservations(s, p);
  const ObservationPair o = BuildObservations(s, p, &noisy);
  EXPECT_EQ(o.value, clean.value);
  EXPECT_NE(o.policy, clean.policy);
}

TEST(TrajectoryIoTest, RoundTripIsBitExact) {
  const EnvParams p = EnvParams::Defaults();
  Rng rng = MakeRng(25, {});
  EnvState s = Reset(p, rng);
  TrajectoryFile file;
  file.snapshots.push_back({0, s, JointVector::Constant(0.25)});
  for (int t = 0; t < 20; ++t) {
    Bins bins;
    for (int& b : bins) b = UniformInt(rng, 0, kNumBins - 1);
    StepInput in;
    in.action = BinsToAction(bins);
    const StepResult r = Step(s, p, in, rng);
    file.records.push_back(MakeRecord(t, bins, in.substeps, s, r));
  }
  std::stringstream buf;
  WriteTrajectory(buf, file);
  const TrajectoryFile back = ReadTrajectory(buf);
  ASSERT_EQ(back.records.size(), file.records.size());
  for (std::size_t i = 0; i < back.records.size(); ++i) {
    EXPECT_EQ(FormatRecord(back.records[i]), FormatRecord(file.records[i]));
    EXPECT_EQ(back.records[i].q, file.records[i].q);
  }
  ASSERT_EQ(back.snapshots.size(), 1u);
  EXPECT_TRUE(BitwiseEqual(back.snapshots[0].state, s) ||
              BitwiseEqual(back.snapshots[0].state, file.snapshots[0].state));
  EXPECT_EQ(back.snapshots[0].slack, file.snapshots[0].slack);
}

TEST(TrajectoryIoTest, MalformedInputNamesLine) {
  std::stringstream buf("{\"step\": 0}\nnot json\n");
  EXPECT_THROW(ReadTrajectory(buf), FormatError);
  EXPECT_THROW(LoadTrajectory("/nonexistent/trajectory.jsonl"), FormatError);
}

}  // namespace
}  // namespace dexsim::env
