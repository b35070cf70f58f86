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

#include <vector>

#include <benchmark/benchmark.h>

#include "dexsim/common/rng.h"
#include "dexsim/env/env_params.h"
#include "dexsim/env/toy_env.h"
#include "dexsim/nn/adam.h"
#include "dexsim/nn/network.h"
#include "dexsim/rand/layers.h"
#include "dexsim/rand/randomization_spec.h"
#include "dexsim/rand/randomized_env.h"
#include "dexsim/rl/gae.h"
#include "dexsim/vision/image.h"

namespace dexsim {
namespace {

env::Bins RandomBins(Rng& rng) {
  env::Bins bins;
  for (int& b : bins) b = UniformInt(rng, 0, env::kNumBins - 1);
  return bins;
}

void BM_ToyEnvStep(benchmark::State& state) {
  env::ToyEnv e(env::EnvParams::Defaults(), MakeRng(1, {}));
  e.Reset();
  Rng rng = MakeRng(2, {});
  for (auto _ : state) {
    const env::StepResult r = e.StepBins(RandomBins(rng), env::NominalSubsteps());
    if (r.done) e.Reset();
    benchmark::DoNotOptimize(r.reward);
  }
}
BENCHMARK(BM_ToyEnvStep);

void BM_RandomizedEnvStep(benchmark::State& state) {
  rand::RandomizedEnv e(env::EnvParams::Defaults(),
                        rand::RandomizationSpec::Defaults());
  std::uint64_t episode = 0;
  e.Reset(episode);
  Rng rng = MakeRng(3, {});
  for (auto _ : state) {
    const auto out = e.Step(RandomBins(rng));
    if (out.result.done) e.Reset(++episode);
    benchmark::DoNotOptimize(out.obs);
  }
}
BENCHMARK(BM_RandomizedEnvStep);

void BM_EnvReset(benchmark::State& state) {
  const env::EnvParams params = env::EnvParams::Defaults();
  Rng rng = MakeRng(4, {});
  for (auto _ : state) benchmark::DoNotOptimize(env::Reset(params, rng));
}
BENCHMARK(BM_EnvReset);

nn::Network BenchNet(int input, int output) {
  Rng rng = MakeRng(5, {});
  nn::Network net = nn::Network::Initialized({input, 64, 32, output}, rng);
  for (double& p : net.mutable_params()) p += Normal(rng, 0.0, 0.05);
  return net;
}

// Forward and backward over one chunk of 10 steps.
void BM_PolicyChunkForwardBackward(benchmark::State& state) {
  const nn::Network net = BenchNet(22, 55);
  Rng rng = MakeRng(6, {});
  Eigen::MatrixXd x(22, 10);
  for (double& v : x.reshaped()) v = Normal(rng, 0.0, 1.0);
  const Eigen::MatrixXd d_out = Eigen::MatrixXd::Ones(55, 10);
  nn::ForwardCache cache;
  for (auto _ : state) {
    nn::HiddenState final_state;
    net.Forward(x, nn::HiddenState::Zero(32), &final_state, &cache);
    benchmark::DoNotOptimize(net.Backward(cache, d_out, nullptr));
  }
}
BENCHMARK(BM_PolicyChunkForwardBackward);

void BM_PolicyStep(benchmark::State& state) {
  const nn::Network net = BenchNet(22, 55);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(22);
  nn::HiddenState h = nn::HiddenState::Zero(32);
  Eigen::VectorXd out;
  for (auto _ : state) {
    net.Step(x, h, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_PolicyStep);

void BM_AdamStep(benchmark::State& state) {
  const nn::Network net = BenchNet(22, 55);
  Eigen::VectorXd params = net.params();
  const Eigen::VectorXd grads = Eigen::VectorXd::Constant(params.size(), 1e-3);
  nn::AdamState adam = nn::AdamState::ForSize(params.size());
  for (auto _ : state) {
    nn::AdamStep(params, grads, adam);
    benchmark::DoNotOptimize(params.data());
  }
}
BENCHMARK(BM_AdamStep);

void BM_Gae(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = MakeRng(7, {});
  std::vector<double> rewards(n), values(n + 1);
  for (double& r : rewards) r = Normal(rng, 0.0, 1.0);
  for (double& v : values) v = Normal(rng, 0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rl::ComputeGae(rewards, values, rl::TerminalKind::kTruncated, {}));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Gae)->Arg(100)->Arg(2000);

void BM_SampleEpisode(benchmark::State& state) {
  const env::EnvParams base = env::EnvParams::Defaults();
  const rand::RandomizationSpec spec = rand::RandomizationSpec::Defaults();
  Rng rng = MakeRng(8, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rand::SampleEpisode(spec, base, rng));
  }
}
BENCHMARK(BM_SampleEpisode);

void BM_AugmentImage(benchmark::State& state) {
  vision::ImageBuffer img = vision::ImageBuffer::Zeros(64, 64);
  Rng rng = MakeRng(9, {});
  for (double& v : img.data) v = Uniform(rng, 0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vision::AugmentImage(img, rng));
  }
}
BENCHMARK(BM_AugmentImage);

}  // namespace
}  // namespace dexsim

BENCHMARK_MAIN();
