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
#include <vector>

#include <gtest/gtest.h>

#include "dexsim/common/errors.h"
#include "dexsim/common/rng.h"
#include "dexsim/env/toy_env.h"
#include "dexsim/rand/layers.h"
#include "dexsim/rand/randomization_spec.h"
#include "dexsim/rand/randomized_env.h"

namespace dexsim::rand {
namespace {

double Std(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= x.size();
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / x.size());
}

env::SensorReadings ZeroReadings() {
  env::SensorReadings r;
  r.fingertips.fill(Eigen::Vector3d::Zero());
  r.object_position.setZero();
  r.relative_goal = Quaternion::Identity();
  return r;
}

TEST(SpecTest, DefaultsValidateAndUnknownPathsAreNamed) {
  const env::EnvParams base = env::EnvParams::Defaults();
  EXPECT_NO_THROW(RandomizationSpec::Defaults().Validate(base));
  RandomizationSpec spec = RandomizationSpec::Defaults();
  spec.physical.params.push_back(
      {"joint.*.bogus", Distribution::LogNormal(0.1)});
  try {
    spec.Validate(base);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("joint.*.bogus"), std::string::npos);
  }
  Rng rng = MakeRng(1, {});
  EXPECT_THROW(SampleEpisode(spec, base, rng), ConfigError);
}

TEST(SpecTest, LayersToggleByName) {
  RandomizationSpec spec = RandomizationSpec::Defaults();
  for (auto name : kLayerNames) {
    spec.LayerEnabled(name) = false;
    EXPECT_FALSE(spec.LayerEnabled(name));
  }
  EXPECT_THROW(spec.LayerEnabled("nope"), ConfigError);
}

TEST(SampleEpisodeTest, AllLayersOffIsNeutral) {
  const env::EnvParams base = env::EnvParams::Defaults();
  Rng rng = MakeRng(2, {});
  const EpisodeNoiseState ns =
      SampleEpisode(RandomizationSpec::AllDisabled(), base, rng);
  EXPECT_TRUE(ns.params == base);
  for (const auto& v : ns.fingertip_offset) EXPECT_EQ(v.norm(), 0.0);
  EXPECT_EQ(ns.object_position_offset.norm(), 0.0);
  EXPECT_EQ(ns.correlated_action_noise.norm(), 0.0);
  EXPECT_EQ(ns.slack.norm(), 0.0);
  EXPECT_EQ(ns.force.norm(), 0.0);
  for (bool d : ns.delayed) EXPECT_FALSE(d);
}

TEST(SampleEpisodeTest, ReproducibleAndWithinDeclaredRanges) {
  const env::EnvParams base = env::EnvParams::Defaults();
  const RandomizationSpec spec = RandomizationSpec::Defaults();
  Rng a = MakeRng(3, {});
  Rng b = MakeRng(3, {});
  for (int i = 0; i < 2000; ++i) {
    const EpisodeNoiseState x = SampleEpisode(spec, base, a);
    const EpisodeNoiseState y = SampleEpisode(spec, base, b);
    ASSERT_TRUE(x.params == y.params);
    ASSERT_EQ(x.object_position_offset, y.object_position_offset);
    ASSERT_GE(x.timing_rate, 1250.0);
    ASSERT_LE(x.timing_rate, 10000.0);
    ASSERT_GE(x.force_probability, 0.001);
    ASSERT_LE(x.force_probability, 0.1);
    for (int k = 0; k < kNumJoints; ++k) {
      ASSERT_GE(x.backlash_neg[k], 0.0);
      ASSERT_GE(x.backlash_pos[k], 0.0);
    }
  }
}

TEST(SampleEpisodeTest, ObjectPositionOffsetStd) {
  const env::EnvParams base = env::EnvParams::Defaults();
  RandomizationSpec spec = RandomizationSpec::AllDisabled();
  spec.observation_noise.enabled = true;
  Rng rng = MakeRng(4, {});
  std::vector<double> x;
  for (int i = 0; i < 100000; ++i) {
    x.push_back(SampleEpisode(spec, base, rng).object_position_offset.x());
  }
  EXPECT_NEAR(Std(x), 0.005, 0.03 * 0.005);
}

TEST(PerturbObservationTest, ZeroStdsAreIdentity) {
  ObservationNoiseLayer layer;
  layer.fingertip_uncorrelated = 0.0;
  layer.object_position_uncorrelated = 0.0;
  layer.orientation_uncorrelated = 0.0;
  const EpisodeNoiseState neutral;
  Rng rng = MakeRng(5, {});
  env::SensorReadings in = ZeroReadings();
  in.object_position = Eigen::Vector3d(0.01, 0.02, 0.03);
  in.relative_goal = AxisAngle(Eigen::Vector3d::UnitY(), 0.7);
  const env::SensorReadings out = PerturbObservation(in, neutral, layer, rng);
  EXPECT_EQ(out.object_position, in.object_position);
  EXPECT_NEAR(GoalDistance(out.relative_goal, in.relative_goal), 0.0, 1e-7);
}

// Static fingertip: per-step std is the uncorrelated 2 mm; the per-episode
// mean offset (correlated + marker misplacement) has std sqrt(1^2 + 3^2) mm.
TEST(PerturbObservationTest, CorrelatedAndUncorrelatedComponents) {
  const env::EnvParams base = env::EnvParams::Defaults();
  RandomizationSpec spec = RandomizationSpec::AllDisabled();
  spec.observation_noise.enabled = true;
  Rng rng = MakeRng(6, {});
  std::vector<double> means, within, diffs;
  const env::SensorReadings truth = ZeroReadings();
  for (int e = 0; e < 4000; ++e) {
    const EpisodeNoiseState ns = SampleEpisode(spec, base, rng);
    env::SensorReadings markers = truth;
    markers.fingertips = MisplacedMarkers(truth.fingertips, ns);
    std::vector<double> xs;
    double previous = 0.0;
    for (int t = 0; t < 100; ++t) {
      const double x = PerturbObservation(markers, ns,
                                          spec.observation_noise, rng)
                           .fingertips[0]
                           .x();
      xs.push_back(x);
      if (t > 0) diffs.push_back(x - previous);
      previous = x;
    }
    double m = 0.0;
    for (double v : xs) m += v;
    means.push_back(m / xs.size());
    for (double v : xs) within.push_back(v - m / xs.size());
  }
  EXPECT_NEAR(Std(within), 0.002, 0.03 * 0.002);
  // The episode mean carries 2 mm / sqrt(100) of per-step noise as well.
  const double expected_mean_std =
      std::sqrt(1e-6 + 9e-6 + 4e-6 / 100.0);
  EXPECT_NEAR(Std(means), expected_mean_std, 0.04 * expected_mean_std);
  EXPECT_NEAR(Std(diffs), 0.002 * std::sqrt(2.0), 0.03 * 0.002 * std::sqrt(2.0));
}

TEST(MarkerDropoutTest, ZeroRatePassesThrough) {
  MarkerDropoutLayer layer;
  layer.rate = 0.0;
  EpisodeNoiseState ns;
  Rng rng = MakeRng(7, {});
  Markers m;
  for (int i = 0; i < kNumJoints; ++i) m[i] = Eigen::Vector3d::Constant(i);
  RememberMarkers(m, ns);
  Markers moved = m;
  moved[2].x() += 1.0;
  EXPECT_EQ(MarkerDropout(moved, ns, layer, 0.08, rng)[2], moved[2]);
  EXPECT_THROW(MarkerDropout(moved, ns, layer, 0.0, rng), UsageError);
}

TEST(MarkerDropoutTest, MaskLastsCeilDurationOverDtSteps) {
  MarkerDropoutLayer layer;
  layer.rate = 1.0 / 0.08;  // certain trigger on the first step
  EpisodeNoiseState ns;
  Rng rng = MakeRng(8, {});
  Markers m;
  m.fill(Eigen::Vector3d::Zero());
  RememberMarkers(m, ns);
  MarkerDropout(m, ns, layer, 0.08, rng);  // triggers
  layer.rate = 0.0;
  int frozen = 1;
  for (int t = 0; t < 40; ++t) {
    Markers moved = m;
    moved[0].x() = t + 1.0;
    if (MarkerDropout(moved, ns, layer, 0.08, rng)[0].x() == 0.0) {
      ++frozen;
    } else {
      break;
    }
  }
  EXPECT_EQ(frozen, static_cast<int>(std::ceil(1.0 / 0.08 - 1e-9)));
}

TEST(MarkerOcclusionTest, DistanceRule) {
  EpisodeNoiseState ns;
  Markers last;
  for (int i = 0; i < kNumJoints; ++i) last[i] = Eigen::Vector3d(i, 0, 0);
  RememberMarkers(last, ns);
  Markers tips;
  for (int i = 0; i < kNumJoints; ++i) tips[i] = Eigen::Vector3d(0, i, 0);
  tips[1] = Eigen::Vector3d(0.0, 0.0, 0.0075);  // 7.5 mm from tip 0
  const Eigen::Vector3d far_object(10.0, 10.0, 10.0);
  Markers markers = tips;
  const Markers occ =
      MarkerOcclusion(markers, tips, far_object, 0.015, ns);
  EXPECT_EQ(occ[0], last[0]);
  EXPECT_EQ(occ[1], last[1]);
  EXPECT_EQ(occ[2], markers[2]);
  const Markers none = MarkerOcclusion(markers, tips, far_object, 0.0, ns);
  for (int i = 0; i < kNumJoints; ++i) EXPECT_EQ(none[i], markers[i]);
}

// Close pass: the occluded steps are exactly those meeting the distance rule.
TEST(MarkerOcclusionTest, ScriptedClosePass) {
  EpisodeNoiseState ns;
  Markers tips;
  for (int i = 0; i < kNumJoints; ++i) tips[i] = Eigen::Vector3d(0, 1.0 + i, 7.0);
  RememberMarkers(tips, ns);
  const Eigen::Vector3d object(5.0, 5.0, 5.0);
  for (int t = 0; t <= 100; ++t) {
    Markers step_tips = tips;
    step_tips[0] = Eigen::Vector3d(-0.05 + 0.001 * t, 1.0, 0.0);
    step_tips[1] = Eigen::Vector3d(0.0, 1.0, 0.0);
    const bool expected = (step_tips[0] - step_tips[1]).norm() < 0.015;
    const Markers out = MarkerOcclusion(step_tips, step_tips, object, 0.015, ns);
    EXPECT_EQ(out[0] == ns.last_marker[0], expected) << t;
  }
}

TEST(PerturbActionTest, DisabledIsIdentityAndClamped) {
  ActionNoiseLayer off;
  off.uncorrelated_additive = 0.0;
  off.uncorrelated_multiplicative = 0.0;
  const EpisodeNoiseState ns;
  Rng rng = MakeRng(9, {});
  JointVector a;
  a << -1.0, -0.3, 0.0, 0.4, 1.0;
  EXPECT_EQ(PerturbAction(a, ns, off, rng), a);
  ActionNoiseLayer big;
  big.uncorrelated_additive = 5.0;
  for (int i = 0; i < 100; ++i) {
    const JointVector out = PerturbAction(a, ns, big, rng);
    EXPECT_LE(out.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(PerturbActionTest, MultiplicativeTermVanishesAtZero) {
  ActionNoiseLayer only_mult;
  only_mult.uncorrelated_additive = 0.0;
  only_mult.uncorrelated_multiplicative = 0.5;
  const EpisodeNoiseState ns;
  Rng rng = MakeRng(10, {});
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(PerturbAction(JointVector::Zero(), ns, only_mult, rng).norm(),
              0.0);
  }
}

TEST(DelayActionTest, FlaggedCoordinateShiftsByOneStep) {
  EpisodeNoiseState ns;
  ns.delayed[3] = true;
  const JointVector x0 = JointVector::Constant(0.1);
  const JointVector x1 = JointVector::Constant(0.2);
  const JointVector x2 = JointVector::Constant(0.3);
  const JointVector y0 = DelayAction(x0, ns);
  const JointVector y1 = DelayAction(x1, ns);
  const JointVector y2 = DelayAction(x2, ns);
  EXPECT_EQ(y0[3], 0.0);
  EXPECT_EQ(y1[3], 0.1);
  EXPECT_EQ(y2[3], 0.2);
  EXPECT_EQ(y2[0], 0.3);
  EpisodeNoiseState none;
  EXPECT_EQ(DelayAction(x1, none), x1);
}

TEST(SubstepsTest, DurationsAtLeastNominalAndMeanMatches) {
  EpisodeNoiseState ns;
  ns.timing_rate = 1250.0;
  Rng rng = MakeRng(11, {});
  double sum = 0.0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    for (double d : SampleSubsteps(ns, rng)) {
      ASSERT_GE(d, 0.008);
      sum += d;
    }
  }
  EXPECT_NEAR(sum / (10.0 * n), 0.0088, 0.01 * 0.0088);
  EpisodeNoiseState unset;
  EXPECT_THROW(SampleSubsteps(unset, rng), UsageError);
}

TEST(BacklashTest, HandExamples) {
  double s = 1.0;
  EXPECT_EQ(Backlash(0.5, s, 0.1, 0.1, 0.08), 0.5);
  s = -1.0;
  EXPECT_EQ(Backlash(1.0, s, 0.1, 0.1, 0.08), 0.0);
  EXPECT_NEAR(s, -0.992, 1e-15);
  s = 0.4;
  EXPECT_EQ(Backlash(0.0, s, 0.1, 0.1, 0.08), 0.0);
  EXPECT_EQ(s, 0.4);
}

TEST(BacklashTest, MagnitudeNeverGrowsAndSlackStaysBounded) {
  Rng rng = MakeRng(12, {});
  for (int i = 0; i < 100000; ++i) {
    double s = Uniform(rng, -1.0, 1.0);
    const double a = Uniform(rng, -1.0, 1.0);
    const double out = Backlash(a, s, Uniform(rng, 0.0, 50.0),
                                Uniform(rng, 0.0, 50.0), 0.08);
    ASSERT_LE(std::abs(out), std::abs(a));
    ASSERT_GE(s, -1.0);
    ASSERT_LE(s, 1.0);
  }
}

TEST(BacklashTest, SlackIsTakenUpBeforeMotionPasses) {
  // 2 units of slack at 0.4 per step: four steps pass nothing, the fifth
  // reaches the boundary and passes at most rounding noise, then full motion.
  double s = -1.0;
  for (int k = 0; k < 4; ++k) EXPECT_EQ(Backlash(1.0, s, 0.0, 5.0, 0.08), 0.0);
  EXPECT_LT(Backlash(1.0, s, 0.0, 5.0, 0.08), 1e-9);
  EXPECT_EQ(s, 1.0);
  EXPECT_EQ(Backlash(1.0, s, 0.0, 5.0, 0.08), 1.0);
}

TEST(RandomForceTest, DecayWithoutTriggers) {
  EpisodeNoiseState ns;
  ns.force_probability = 0.0;
  ns.force = Eigen::Vector3d(1.0, -2.0, 3.0);
  const Eigen::Vector3d f0 = ns.force;
  RandomForceLayer layer;
  Rng rng = MakeRng(13, {});
  for (int k = 1; k <= 50; ++k) {
    const Eigen::Vector3d f = RandomForce(ns, 0.1, 0.08, layer, rng);
    EXPECT_NEAR((f - f0 * std::pow(0.99, k)).norm(), 0.0, 1e-14);
  }
  EXPECT_THROW(RandomForce(ns, 0.0, 0.08, layer, rng), UsageError);
}

TEST(RandomForceTest, TriggeredDrawStdEqualsMass) {
  EpisodeNoiseState ns;
  ns.force_probability = 1.0;
  RandomForceLayer layer;
  Rng rng = MakeRng(14, {});
  std::vector<double> x;
  for (int i = 0; i < 300000; ++i) {
    x.push_back(RandomForce(ns, 0.5, 0.08, layer, rng).y());
  }
  EXPECT_NEAR(Std(x), 0.5, 0.01 * 0.5);
}

TEST(RandomizedEnvTest, AllLayersOffMatchesBareEnvironment) {
  const env::EnvParams base = env::EnvParams::Defaults();
  RandomizedEnv wrapped(base, RandomizationSpec::AllDisabled());
  wrapped.Reset(77);
  env::ToyEnv bare(base, MakeRng(77, {kEnvStream}));
  bare.Reset();
  ASSERT_TRUE(env::BitwiseEqual(wrapped.state(), bare.state()));
  Rng actions = MakeRng(15, {});
  for (int t = 0; t < 300; ++t) {
    env::Bins bins;
    for (int& b : bins) b = UniformInt(actions, 0, env::kNumBins - 1);
    const auto out = wrapped.Step(bins);
    const env::StepResult r = bare.StepBins(bins, env::NominalSubsteps());
    ASSERT_TRUE(env::BitwiseEqual(wrapped.state(), bare.state())) << t;
    ASSERT_EQ(out.result.reward, r.reward);
    if (r.done) {
      wrapped.Reset(78 + t);
      bare = env::ToyEnv(base, MakeRng(78 + t, {kEnvStream}));
      bare.Reset();
    }
  }
}

TEST(RandomizedEnvTest, CorrelatedOffsetsConstantWithinEpisode) {
  RandomizedEnv env(env::EnvParams::Defaults(), RandomizationSpec::Defaults());
  env.Reset(5);
  const EpisodeNoiseState first = env.noise();
  for (int t = 0; t < 50; ++t) {
    env.Step(env::Bins{5, 5, 5, 5, 5});
    ASSERT_EQ(env.noise().object_position_offset, first.object_position_offset);
    ASSERT_EQ(env.noise().fingertip_offset[2], first.fingertip_offset[2]);
    ASSERT_EQ(env.noise().correlated_action_noise,
              first.correlated_action_noise);
    ASSERT_EQ(env.noise().delayed, first.delayed);
  }
}

TEST(RandomizedEnvTest, SameSeedSameEpisode) {
  auto run = [] {
    RandomizedEnv env(env::EnvParams::Defaults(),
                      RandomizationSpec::Defaults());
    env.Reset(11);
    std::vector<double> rewards;
    for (int t = 0; t < 100; ++t) {
      rewards.push_back(env.Step(env::Bins{1, 9, 3, 7, 5}).result.reward);
    }
    return rewards;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace dexsim::rand
