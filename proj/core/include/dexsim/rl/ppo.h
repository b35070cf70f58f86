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

#ifndef DEXSIM_RL_PPO_H_
#define DEXSIM_RL_PPO_H_

#include <vector>

namespace dexsim::rl {

struct PpoConfig {
  double clip_epsilon = 0.2;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  int chunks_per_minibatch = 20;
  int epochs = 4;

  void Validate() const;
};

struct PpoInputs {
  std::vector<double> logp_new;
  std::vector<double> logp_old;
  std::vector<double> advantages;  // already normalized per minibatch
  std::vector<double> values_pred;
  std::vector<double> value_targets;  // normalized
  std::vector<double> entropy;
};

struct PpoResult {
  double loss = 0.0;
  double surrogate = 0.0;
  double value_loss = 0.0;
  double mean_entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;  // mean(logp_old - logp_new)

  // Gradients of `loss` w.r.t. each per-sample input.
  std::vector<double> d_logp_new;
  std::vector<double> d_values_pred;
  std::vector<double> d_entropy;
};

// total = -mean(min(rho A, clip(rho, 1-eps, 1+eps) A))
//         + c_v mean((v - target)^2) - c_H mean(entropy)
PpoResult PpoLoss(const PpoInputs& in, const PpoConfig& config);

// Zero mean, unit (population) std; std floored at 1e-8.
std::vector<double> NormalizeAdvantages(const std::vector<double>& advantages);

}  // namespace dexsim::rl

#endif  // DEXSIM_RL_PPO_H_
