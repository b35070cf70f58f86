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

#include "dexsim/train/evaluate.h"

#include <algorithm>

#include "dexsim/common/errors.h"
#include "dexsim/common/rng.h"
#include "dexsim/nn/categorical.h"
#include "dexsim/rand/randomized_env.h"

namespace dexsim::train {

namespace {
constexpr std::uint64_t kEvalEpisodeTag = 0xE7A1;
constexpr std::uint64_t kEvalActionTag = 0xE7A2;
}  // namespace

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

EvalResult Evaluate(const nn::Network& policy,
                    const rl::RunningNormalizer& policy_normalizer,
                    const env::EnvParams& base,
                    const rand::RandomizationSpec& spec,
                    const EvalConfig& config) {
  EvalResult out;
  rand::RandomizedEnv env(base, spec);
  Eigen::VectorXd logits;
  for (int e = 0; e < config.episodes; ++e) {
    const auto id = static_cast<std::uint64_t>(e);
    // A physical draw that cannot hold the object is redrawn, as in
    // training.
    env::ObservationPair obs;
    for (std::uint64_t attempt = 0;; ++attempt) {
      const std::uint64_t seed =
          attempt == 0
              ? DeriveSeed(config.seed, {kEvalEpisodeTag, id})
              : DeriveSeed(config.seed, {kEvalEpisodeTag, id, attempt});
      try {
        obs = env.Reset(seed);
        break;
      } catch (const InitializationError&) {
        ++out.discarded_draws;
        if (attempt + 1 >= static_cast<std::uint64_t>(env::kMaxResetAttempts)) {
          throw;
        }
      }
    }
    Rng action_rng = MakeRng(config.seed, {kEvalActionTag, id});
    nn::HiddenState h = nn::HiddenState::Zero(policy.shape().lstm);
    double ret = 0.0;
    int steps = 0;
    while (steps < config.max_steps) {
      policy.Step(policy_normalizer.Apply(obs.policy), h, logits);
      const std::vector<int> chosen =
          config.greedy ? nn::GreedyAction(logits)
                        : nn::SampleAction(logits, action_rng).bins;
      env::Bins bins;
      std::copy(chosen.begin(), chosen.end(), bins.begin());
      const auto step = env.Step(bins);
      obs = step.obs;
      ret += step.result.reward;
      ++steps;
      if (step.result.done) {
        if (step.result.dropped) ++out.drops;
        break;
      }
    }
    out.consecutive_goals.push_back(env.state().consecutive_goals);
    out.lengths.push_back(steps);
    out.returns.push_back(ret);
  }
  out.median_goals = Median(std::vector<double>(out.consecutive_goals.begin(),
                                                out.consecutive_goals.end()));
  return out;
}

}  // namespace dexsim::train
