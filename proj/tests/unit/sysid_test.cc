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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dexsim/common/errors.h"
#include "dexsim/common/rng.h"
#include "dexsim/env/env_params.h"
#include "dexsim/env/toy_env.h"
#include "dexsim/sysid/calibration.h"
#include "dexsim/sysid/sensor_map.h"

namespace dexsim::sysid {
namespace {

std::vector<RecordedTrajectory> ShortTrajectories(const env::EnvParams& p) {
  ScriptOptions opts;
  opts.frequencies = {0.5};
  opts.seconds_per_frequency = 3.0;
  Rng rng = MakeRng(3, {});
  const env::EnvState start = env::Reset(p, rng);
  return {RecordScript(p, start, 0, ScriptKind::kOscillation, opts),
          RecordScript(p, start, 1, ScriptKind::kLimitSweep, opts)};
}

TEST(CalibrationTest, RecordingHasSnapshotsEverySegment) {
  const auto trajs = ShortTrajectories(env::EnvParams::Defaults());
  for (const auto& t : trajs) {
    const int steps = static_cast<int>(t.file.records.size());
    ASSERT_GT(steps, kSegmentSteps);
    EXPECT_EQ(static_cast<int>(t.file.snapshots.size()),
              (steps + kSegmentSteps - 1) / kSegmentSteps);
  }
}

TEST(CalibrationTest, GroundTruthReplaysExactly) {
  const env::EnvParams truth = env::EnvParams::Defaults();
  const auto trajs = ShortTrajectories(truth);
  const ReplayError e = ComputeReplayError(truth, trajs);
  EXPECT_EQ(e.error, 0.0);
  EXPECT_EQ(e.blowups, 0);
  EXPECT_GT(e.segments, 0);
  EXPECT_EQ(ComputeReplayError(truth, trajs, 2).error, 0.0);
}

TEST(CalibrationTest, PerturbedParametersIncreaseError) {
  const env::EnvParams truth = env::EnvParams::Defaults();
  const auto trajs = ShortTrajectories(truth);
  env::EnvParams wrong = truth;
  wrong.joints[0].damping *= 2.0;
  EXPECT_GT(ComputeReplayError(wrong, trajs).error, 0.0);
}

TEST(CalibrationTest, DescentFromTruthTakesNoSteps) {
  const env::EnvParams truth = env::EnvParams::Defaults();
  const auto trajs = ShortTrajectories(truth);
  const DescentResult r =
      CoordinateDescent(truth, trajs, {"joint.0.damping", "actuator.1.gain"});
  EXPECT_TRUE(r.steps.empty());
  EXPECT_EQ(r.passes, 1);
  EXPECT_EQ(r.final_objective, 0.0);
  EXPECT_TRUE(r.params == truth);
}

// Each accepted step lowers the objective by more than the threshold.
TEST(CalibrationTest, DescentIsStrictlyMonotone) {
  const env::EnvParams truth = env::EnvParams::Defaults();
  const auto trajs = ShortTrajectories(truth);
  env::EnvParams start = truth;
  start.joints[0].damping *= 1.7;
  const DescentResult r = CoordinateDescent(start, trajs, {"joint.0.damping"});
  ASSERT_FALSE(r.steps.empty());
  double prev = r.start_objective;
  for (const AcceptedStep& s : r.steps) {
    EXPECT_LT(s.objective, prev * (1.0 - kAcceptThreshold));
    prev = s.objective;
  }
  EXPECT_EQ(r.final_objective, prev);
  EXPECT_LT(r.final_objective, 0.1 * r.start_objective);
}

TEST(CalibrationTest, RejectsEmptyInputs) {
  const env::EnvParams truth = env::EnvParams::Defaults();
  EXPECT_THROW(CoordinateDescent(truth, {}, {"joint.0.damping"}), UsageError);
  const auto trajs = ShortTrajectories(truth);
  EXPECT_THROW(CoordinateDescent(truth, trajs, {}), UsageError);
  EXPECT_THROW(CoordinateDescent(truth, trajs, {"joint.9.nothing"}),
               ConfigError);
}

TEST(SensorMapTest, RecoversPiecewiseLinearTruth) {
  // Truth is linear, so any knot placement reproduces it.
  Rng rng = MakeRng(4, {});
  std::vector<double> raw, truth;
  for (int i = 0; i < 500; ++i) {
    raw.push_back(Uniform(rng, 100.0, 900.0));
    truth.push_back(0.002 * raw.back() - 0.9);
  }
  for (int knots = 3; knots <= 5; ++knots) {
    const SensorMap m = FitSensorMap(raw, truth, knots);
    EXPECT_EQ(m.raw.size(), std::size_t(knots));
    for (double r : {100.0, 333.0, 900.0, 1200.0, 0.0}) {
      EXPECT_NEAR(m(r), 0.002 * r - 0.9, 1e-9) << r;
    }
  }
}

TEST(SensorMapTest, InterpolatesBetweenKnots) {
  const SensorMap m{{0.0, 1.0, 3.0}, {0.0, 2.0, 0.0}};
  EXPECT_EQ(m(0.5), 1.0);
  EXPECT_EQ(m(2.0), 1.0);
  EXPECT_EQ(m(-1.0), -2.0);
  EXPECT_EQ(m(5.0), -2.0);
}

TEST(SensorMapTest, RejectsBadInput) {
  EXPECT_THROW(FitSensorMap({1, 2, 3}, {1, 2, 3}, 2), UsageError);
  EXPECT_THROW(FitSensorMap({1, 2, 3}, {1, 2}, 3), UsageError);
  EXPECT_THROW(FitSensorMap({1, 1, 1, 1}, {1, 2, 3, 4}, 3), UsageError);
  const SensorMap bad{{0.0, 0.0, 1.0}, {0.0, 1.0, 2.0}};
  EXPECT_THROW(bad.Validate(), UsageError);
}

}  // namespace
}  // namespace dexsim::sysid
