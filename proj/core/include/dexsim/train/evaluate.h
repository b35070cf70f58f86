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

#ifndef DEXSIM_TRAIN_EVALUATE_H_
#define DEXSIM_TRAIN_EVALUATE_H_

#include <cstdint>
#include <vector>

#include "dexsim/env/env_params.h"
#include "dexsim/nn/network.h"
#include "dexsim/rand/randomization_spec.h"
#include "dexsim/rl/normalizer.h"

namespace dexsim::train {

struct EvalConfig {
  int episodes = 20;
  int max_steps = 6000;  // per episode; the goal timeout ends most earlier
  bool greedy = true;
  std::uint64_t seed = 0;
};

struct EvalResult {
  std::vector<int> consecutive_goals;  // per episode
  std::vector<int> lengths;
  std::vector<double> returns;
  int drops = 0;
  int discarded_draws = 0;  // randomized draws that failed to initialize
  double median_goals = 0.0;
};

double Median(std::vector<double> values);

// Runs the policy from a zero hidden state on fresh randomized episodes.
// Greedy mode takes the most probable bin per coordinate.
EvalResult Evaluate(const nn::Network& policy,
                    const rl::RunningNormalizer& policy_normalizer,
                    const env::EnvParams& base,
                    const rand::RandomizationSpec& spec,
                    const EvalConfig& config);

}  // namespace dexsim::train

#endif  // DEXSIM_TRAIN_EVALUATE_H_
