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
#include <sstream>

#include <gtest/gtest.h>

#include "dexsim/common/binary_io.h"
#include "dexsim/common/errors.h"
#include "dexsim/common/quaternion.h"
#include "dexsim/common/rng.h"
#include "dexsim/common/text_format.h"

namespace dexsim {
namespace {

TEST(RngTest, EqualPathsGiveEqualStreams) {
  Rng a = MakeRng(42, {1, 2, 3});
  Rng b = MakeRng(42, {1, 2, 3});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RngTest, DifferentPathsDiffer) {
  EXPECT_NE(DeriveSeed(42, {1, 2}), DeriveSeed(42, {2, 1}));
  EXPECT_NE(DeriveSeed(42, {1}), DeriveSeed(43, {1}));
  EXPECT_NE(DeriveSeed(42, {}), DeriveSeed(42, {0}));
}

TEST(RngTest, StateRoundTripResumesStream) {
  Rng a = MakeRng(7, {});
  for (int i = 0; i < 10; ++i) a();
  Rng b = LoadRngState(SaveRngState(a));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RngTest, DistributionMoments) {
  Rng rng = MakeRng(1, {});
  constexpr int n = 200000;
  double sum_exp = 0.0, sum_norm = 0.0, sum_norm2 = 0.0, sum_log = 0.0;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    sum_exp += Exponential(rng, 4.0);
    const double z = Normal(rng, 1.0, 2.0);
    sum_norm += z;
    sum_norm2 += (z - 1.0) * (z - 1.0);
    sum_log += std::log(LogUniform(rng, 1e-3, 1e-1));
    hits += Bernoulli(rng, 0.3);
  }
  EXPECT_NEAR(sum_exp / n, 0.25, 0.005);
  EXPECT_NEAR(sum_norm / n, 1.0, 0.02);
  EXPECT_NEAR(std::sqrt(sum_norm2 / n), 2.0, 0.02);
  EXPECT_NEAR(sum_log / n, 0.5 * (std::log(1e-3) + std::log(1e-1)), 0.02);
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.3, 0.005);
}

TEST(RngTest, UniformIntIsInclusive) {
  Rng rng = MakeRng(2, {});
  bool lo = false, hi = false;
  for (int i = 0; i < 1000; ++i) {
    const int k = UniformInt(rng, 0, 3);
    ASSERT_GE(k, 0);
    ASSERT_LE(k, 3);
    lo |= k == 0;
    hi |= k == 3;
  }
  EXPECT_TRUE(lo && hi);
}

TEST(RngTest, UnitVectorsHaveUnitNorm) {
  Rng rng = MakeRng(3, {});
  for (int i = 0; i < 1000; ++i) {
    EXPECT_NEAR(UniformUnitVector3(rng).norm(), 1.0, 1e-12);
  }
}

TEST(QuaternionTest, GoalDistanceMatchesAxisAngle) {
  for (double angle : {0.0, 0.1, 1.0, 2.5, M_PI}) {
    const Quaternion q = AxisAngle(Eigen::Vector3d(1, 2, 3).normalized(), angle);
    EXPECT_NEAR(GoalDistance(Quaternion::Identity(), q), angle, 1e-7);
  }
}

TEST(QuaternionTest, GoalDistanceIgnoresSignAndIsSymmetric) {
  Rng rng = MakeRng(4, {});
  for (int i = 0; i < 200; ++i) {
    const Quaternion a = UniformRandomQuaternion(rng);
    const Quaternion b = UniformRandomQuaternion(rng);
    Quaternion nb = b;
    nb.coeffs() = -nb.coeffs();
    const double d = GoalDistance(a, b);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, M_PI + 1e-12);
    EXPECT_NEAR(d, GoalDistance(b, a), 1e-12);
    EXPECT_NEAR(d, GoalDistance(a, nb), 1e-12);
  }
}

TEST(QuaternionTest, RejectsNonUnitInput) {
  Quaternion bad(2.0, 0.0, 0.0, 0.0);
  EXPECT_THROW(GoalDistance(bad, Quaternion::Identity()), UsageError);
}

TEST(QuaternionTest, RelativeRotationComposesBackToGoal) {
  Rng rng = MakeRng(5, {});
  for (int i = 0; i < 100; ++i) {
    const Quaternion goal = UniformRandomQuaternion(rng);
    const Quaternion cur = UniformRandomQuaternion(rng);
    const Quaternion rel = RelativeRotation(goal, cur);
    EXPECT_GE(rel.w(), 0.0);
    EXPECT_NEAR(GoalDistance(rel * cur, goal), 0.0, 1e-6);
  }
}

TEST(BinaryIoTest, RoundTripIsBitExact) {
  std::stringstream buf;
  BinaryWriter w(buf);
  const Eigen::MatrixXd m = Eigen::MatrixXd::Random(3, 4);
  const Eigen::VectorXd v = Eigen::VectorXd::Random(5);
  w.U64(123);
  w.I64(-7);
  w.F64(0.1);
  w.Str("hello");
  w.Vec(v);
  w.Mat(m);
  w.Doubles({1.5, -2.5});
  w.Ints({4, 5, 6});
  BinaryReader r(buf);
  EXPECT_EQ(r.U64(), 123u);
  EXPECT_EQ(r.I64(), -7);
  EXPECT_EQ(r.F64(), 0.1);
  EXPECT_EQ(r.Str(), "hello");
  EXPECT_EQ(r.Vec(), v);
  EXPECT_EQ(r.Mat(), m);
  EXPECT_EQ(r.Doubles(), (std::vector<double>{1.5, -2.5}));
  EXPECT_EQ(r.Ints(), (std::vector<int>{4, 5, 6}));
}

TEST(BinaryIoTest, TruncatedInputThrows) {
  std::stringstream buf;
  BinaryWriter(buf).U64(1);
  BinaryReader r(buf);
  r.U64();
  EXPECT_THROW(r.U64(), FormatError);
}

TEST(TextFormatTest, DoublesRoundTripThroughText) {
  for (double x : {0.1, -1e-300, 1.0 / 3.0, 6.02e23}) {
    EXPECT_EQ(std::stod(FormatDouble(x)), x);
  }
  EXPECT_THROW(FormatDouble(NAN), NumericalError);
  const std::vector<double> a = {1.0, 2.5};
  EXPECT_EQ(FormatArray(a), "[1,2.5]");
  EXPECT_EQ(QuoteJson("a\"b"), "\"a\\\"b\"");
}

}  // namespace
}  // namespace dexsim
