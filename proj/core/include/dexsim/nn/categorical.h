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

#ifndef DEXSIM_NN_CATEGORICAL_H_
#define DEXSIM_NN_CATEGORICAL_H_

#include <vector>

#include <Eigen/Core>

#include "dexsim/common/rng.h"

namespace dexsim::nn {

inline constexpr int kNumBins = 11;

// Logits are laid out coordinate-major: entries [k * 11, k * 11 + 11) belong
// to action coordinate k.
struct ActionSample {
  std::vector<int> bins;
  double logprob = 0.0;
  double entropy = 0.0;
};

// Per-coordinate softmax probabilities, same layout as the logits.
Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);

ActionSample SampleAction(const Eigen::VectorXd& logits, Rng& rng);
std::vector<int> GreedyAction(const Eigen::VectorXd& logits);

double LogProb(const Eigen::VectorXd& logits, const std::vector<int>& bins);
double Entropy(const Eigen::VectorXd& logits);

// d logprob / d logits = onehot(bin) - p per coordinate.
Eigen::VectorXd LogProbGradient(const Eigen::VectorXd& logits,
                                const std::vector<int>& bins);
// d entropy / d logits = -p * (log p + H_k) per coordinate.
Eigen::VectorXd EntropyGradient(const Eigen::VectorXd& logits);

}  // namespace dexsim::nn

#endif  // DEXSIM_NN_CATEGORICAL_H_
