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
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "dexsim/common/binary_io.h"
#include "dexsim/common/errors.h"
#include "dexsim/common/rng.h"
#include "dexsim/rl/gae.h"
#include "dexsim/rl/normalizer.h"
#include "dexsim/rl/ppo.h"

namespace dexsim::rl {
namespace {

std::vector<double> RandomVector(int n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = Normal(rng, 0.0, scale);
  return v;
}

// Direct sum over future residuals.
std::vector<double> GaeBySum(const std::vector<double>& r,
                             std::vector<double> v, TerminalKind kind,
                             double gamma, double lambda) {
  const int n = static_cast<int>(r.size());
  if (kind == TerminalKind::kTerminal) v[n] = 0.0;
  std::vector<double> adv(n, 0.0);
  for (int t = 0; t < n; ++t) {
    double w = 1.0;
    for (int k = t; k < n; ++k) {
      adv[t] += w * (r[k] + gamma * v[k + 1] - v[k]);
      w *= gamma * lambda;
    }
  }
  return adv;
}

TEST(GaeTest, MatchesDirectSum) {
  Rng rng = MakeRng(1, {});
  for (TerminalKind kind : {TerminalKind::kTerminal, TerminalKind::kTruncated}) {
    for (int n : {1, 2, 17, 200}) {
      const auto r = RandomVector(n, rng);
      const auto v = RandomVector(n + 1, rng);
      const GaeResult g = ComputeGae(r, v, kind, {0.99, 0.9});
      const auto oracle = GaeBySum(r, v, kind, 0.99, 0.9);
      ASSERT_EQ(g.advantages.size(), std::size_t(n));
      for (int t = 0; t < n; ++t) {
        EXPECT_NEAR(g.advantages[t], oracle[t], 1e-12);
        EXPECT_NEAR(g.value_targets[t], oracle[t] + v[t], 1e-12);
      }
    }
  }
}

TEST(GaeTest, LambdaLimits) {
  Rng rng = MakeRng(2, {});
  const auto r = RandomVector(30, rng);
  const auto v = RandomVector(31, rng);
  const double gamma = 0.97;
  const GaeResult td = ComputeGae(r, v, TerminalKind::kTruncated, {gamma, 0.0});
  for (int t = 0; t < 30; ++t) {
    EXPECT_NEAR(td.advantages[t], r[t] + gamma * v[t + 1] - v[t], 1e-14);
  }
  // lambda = 1 on a terminal segment: discounted return minus baseline.
  const GaeResult mc = ComputeGae(r, v, TerminalKind::kTerminal, {gamma, 1.0});
  double ret = 0.0;
  for (int t = 29; t >= 0; --t) {
    ret = r[t] + gamma * ret;
    EXPECT_NEAR(mc.value_targets[t], ret, 1e-12);
  }
}

TEST(GaeTest, TerminalIgnoresLastValue) {
  const std::vector<double> r = {1.0, 2.0};
  const GaeResult a =
      ComputeGae(r, {0.5, 0.5, 100.0}, TerminalKind::kTerminal, {0.9, 0.8});
  const GaeResult b =
      ComputeGae(r, {0.5, 0.5, -7.0}, TerminalKind::kTerminal, {0.9, 0.8});
  EXPECT_EQ(a.advantages, b.advantages);
  const GaeResult c =
      ComputeGae(r, {0.5, 0.5, 100.0}, TerminalKind::kTruncated, {0.9, 0.8});
  EXPECT_NE(a.advantages, c.advantages);
}

TEST(GaeTest, RejectsBadInput) {
  EXPECT_THROW(ComputeGae({1.0}, {0.0}, TerminalKind::kTerminal, {}),
               UsageError);
  GaeConfig bad;
  bad.gamma = 1.5;
  EXPECT_THROW(bad.Validate(), ConfigError);
  bad.gamma = 0.9;
  bad.lambda = -0.1;
  EXPECT_THROW(bad.Validate(), ConfigError);
}

PpoInputs RandomInputs(int n, Rng& rng) {
  PpoInputs in;
  in.logp_new = RandomVector(n, rng, 0.3);
  in.logp_old = RandomVector(n, rng, 0.3);
  in.advantages = RandomVector(n, rng);
  in.values_pred = RandomVector(n, rng);
  in.value_targets = RandomVector(n, rng);
  in.entropy = RandomVector(n, rng);
  return in;
}

TEST(PpoTest, HandComputedExample) {
  PpoInputs in;
  // ratios e^0.5 (clipped for A > 0), 1, e^-0.5 (clipped for A < 0 keeps
  // the unclipped smaller term).
  in.logp_new = {0.5, 0.0, -0.5};
  in.logp_old = {0.0, 0.0, 0.0};
  in.advantages = {1.0, 2.0, -1.0};
  in.values_pred = {1.0, 0.0, 0.0};
  in.value_targets = {0.0, 0.0, 2.0};
  in.entropy = {1.0, 2.0, 3.0};
  const PpoConfig cfg;
  const PpoResult res = PpoLoss(in, cfg);
  const double s0 = std::min(std::exp(0.5) * 1.0, 1.2 * 1.0);
  const double s1 = 2.0;
  const double s2 = std::min(std::exp(-0.5) * -1.0, 0.8 * -1.0);
  const double surrogate = (s0 + s1 + s2) / 3.0;
  const double value_loss = (1.0 + 0.0 + 4.0) / 3.0;
  EXPECT_NEAR(res.surrogate, surrogate, 1e-15);
  EXPECT_NEAR(res.value_loss, value_loss, 1e-15);
  EXPECT_NEAR(res.mean_entropy, 2.0, 1e-15);
  EXPECT_NEAR(res.loss, -surrogate + 0.5 * value_loss - 0.01 * 2.0, 1e-15);
  EXPECT_NEAR(res.clip_fraction, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(res.approx_kl, 0.0, 1e-15);
  // Clipped terms carry no policy gradient.
  EXPECT_EQ(res.d_logp_new[0], 0.0);
  EXPECT_NEAR(res.d_logp_new[1], -2.0 / 3.0, 1e-15);
  EXPECT_EQ(res.d_logp_new[2], 0.0);
}

TEST(PpoTest, GradientsMatchFiniteDifferences) {
  Rng rng = MakeRng(3, {});
  const PpoConfig cfg;
  const double h = 1e-7;
  for (int trial = 0; trial < 20; ++trial) {
    const PpoInputs in = RandomInputs(16, rng);
    const PpoResult res = PpoLoss(in, cfg);
    for (int i = 0; i < 16; ++i) {
      const double ratio = std::exp(in.logp_new[i] - in.logp_old[i]);
      if (std::abs(ratio - 0.8) < 1e-4 || std::abs(ratio - 1.2) < 1e-4) {
        continue;  // kink of the clipped objective
      }
      auto fd = [&](std::vector<double> PpoInputs::*field) {
        PpoInputs p = in, m = in;
        (p.*field)[i] += h;
        (m.*field)[i] -= h;
        return (PpoLoss(p, cfg).loss - PpoLoss(m, cfg).loss) / (2 * h);
      };
      EXPECT_NEAR(res.d_logp_new[i], fd(&PpoInputs::logp_new), 1e-7);
      EXPECT_NEAR(res.d_values_pred[i], fd(&PpoInputs::values_pred), 1e-7);
      EXPECT_NEAR(res.d_entropy[i], fd(&PpoInputs::entropy), 1e-7);
    }
  }
}

TEST(PpoTest, RejectsMismatchedSizes) {
  Rng rng = MakeRng(4, {});
  PpoInputs in = RandomInputs(4, rng);
  in.entropy.pop_back();
  EXPECT_THROW(PpoLoss(in, {}), UsageError);
}

TEST(PpoTest, NormalizeAdvantages) {
  Rng rng = MakeRng(5, {});
  const auto a = NormalizeAdvantages(RandomVector(100, rng, 3.0));
  const double mean = std::accumulate(a.begin(), a.end(), 0.0) / 100.0;
  double var = 0.0;
  for (double x : a) var += (x - mean) * (x - mean);
  EXPECT_NEAR(mean, 0.0, 1e-14);
  EXPECT_NEAR(var / 100.0, 1.0, 1e-12);
  const auto flat = NormalizeAdvantages({2.0, 2.0, 2.0});
  for (double x : flat) EXPECT_EQ(x, 0.0);
}

// Merging batches in any split equals statistics over the concatenation.
TEST(NormalizerTest, MergeMatchesBatchStatistics) {
  Rng rng = MakeRng(6, {});
  for (int trial = 0; trial < 50; ++trial) {
    const int total = 1 + static_cast<int>(Uniform(rng, 0.0, 300.0));
    Eigen::MatrixXd data(3, total);
    for (double& x : data.reshaped()) x = Normal(rng, 5.0, 2.0);
    RunningNormalizer norm(3);
    int pos = 0;
    while (pos < total) {
      const int take = std::min(
          total - pos, 1 + static_cast<int>(Uniform(rng, 0.0, 40.0)));
      norm.Update(data.middleCols(pos, take));
      pos += take;
    }
    const Eigen::VectorXd mean = data.rowwise().mean();
    const Eigen::VectorXd var =
        (data.colwise() - mean).array().square().rowwise().mean();
    EXPECT_EQ(norm.count(), total);
    EXPECT_LT((norm.mean() - mean).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((norm.variance() - var).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(NormalizerTest, ApplyClipsAndInverts) {
  RunningNormalizer norm(2);
  Eigen::MatrixXd batch(2, 2);
  batch << 0.0, 2.0, 10.0, 10.0;
  norm.Update(batch);
  Eigen::VectorXd x(2);
  x << 1.5, 10.0;
  const Eigen::VectorXd y = norm.Apply(x);
  EXPECT_DOUBLE_EQ(y[0], 0.5);
  EXPECT_EQ(y[1], 0.0);
  EXPECT_LT((norm.Denormalize(y) - x).norm(), 1e-12);
  x << 100.0, 11.0;  // second dimension has std floored at 1e-8
  const Eigen::VectorXd c = norm.Apply(x);
  EXPECT_EQ(c[0], kNormalizerClip);
  EXPECT_EQ(c[1], kNormalizerClip);
}

TEST(NormalizerTest, UsageErrors) {
  RunningNormalizer norm(2);
  EXPECT_THROW(norm.Apply(Eigen::VectorXd::Zero(2)), UsageError);
  norm.Update(Eigen::MatrixXd::Ones(2, 3));
  EXPECT_THROW(norm.Apply(Eigen::VectorXd::Zero(3)), UsageError);
}

TEST(NormalizerTest, SerializationRoundTrip) {
  Rng rng = MakeRng(7, {});
  RunningNormalizer norm(4);
  Eigen::MatrixXd batch(4, 9);
  for (double& x : batch.reshaped()) x = Normal(rng, 0.0, 1.0);
  norm.Update(batch);
  std::stringstream buf;
  BinaryWriter w(buf);
  norm.Write(w);
  BinaryReader r(buf);
  EXPECT_EQ(RunningNormalizer::Read(r), norm);
}

}  // namespace
}  // namespace dexsim::rl
