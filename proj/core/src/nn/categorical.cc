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

#include "dexsim/nn/categorical.h"

#include <algorithm>
#include <cmath>

#include "dexsim/common/errors.h"

namespace dexsim::nn {

namespace {

int NumCoords(const Eigen::VectorXd& logits) {
  if (logits.size() == 0 || logits.size() % kNumBins != 0) {
    throw UsageError("policy head: logit count must be a multiple of 11");
  }
  return static_cast<int>(logits.size() / kNumBins);
}

// Log-softmax of one coordinate block.
Eigen::Matrix<double, kNumBins, 1> LogSoftmaxBlock(
    const Eigen::VectorXd& logits, int k) {
  Eigen::Matrix<double, kNumBins, 1> z = logits.segment<kNumBins>(k * kNumBins);
  const double m = z.maxCoeff();
  const double lse = m + std::log((z.array() - m).exp().sum());
  return z.array() - lse;
}

double BlockEntropy(const Eigen::Matrix<double, kNumBins, 1>& logp) {
  double h = 0.0;
  for (int j = 0; j < kNumBins; ++j) {
    const double p = std::exp(logp[j]);
    if (p > 0.0) h -= p * logp[j];
  }
  return h;
}

}  // namespace

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  const int m = NumCoords(logits);
  Eigen::VectorXd p(logits.size());
  for (int k = 0; k < m; ++k) {
    p.segment<kNumBins>(k * kNumBins) = LogSoftmaxBlock(logits, k).array().exp();
  }
  return p;
}

ActionSample SampleAction(const Eigen::VectorXd& logits, Rng& rng) {
  const int m = NumCoords(logits);
  ActionSample out;
  out.bins.resize(m);
  for (int k = 0; k < m; ++k) {
    const auto logp = LogSoftmaxBlock(logits, k);
    const double u = Uniform(rng, 0.0, 1.0);
    double cum = 0.0;
    int chosen = kNumBins - 1;
    for (int j = 0; j < kNumBins; ++j) {
      const double p = std::exp(logp[j]);
      cum += p;
      if (u < cum && p > 0.0) {
        chosen = j;
        break;
      }
    }
    // Rounding can leave u above the final cumulative sum; fall back to the
    // last bin with nonzero mass.
    while (chosen > 0 && std::exp(logp[chosen]) == 0.0) --chosen;
    out.bins[k] = chosen;
    out.logprob += logp[chosen];
    out.entropy += BlockEntropy(logp);
  }
  return out;
}

std::vector<int> GreedyAction(const Eigen::VectorXd& logits) {
  const int m = NumCoords(logits);
  std::vector<int> bins(m);
  for (int k = 0; k < m; ++k) {
    logits.segment<kNumBins>(k * kNumBins).maxCoeff(&bins[k]);
  }
  return bins;
}

double LogProb(const Eigen::VectorXd& logits, const std::vector<int>& bins) {
  const int m = NumCoords(logits);
  if (static_cast<int>(bins.size()) != m) {
    throw UsageError("policy head: action has wrong number of coordinates");
  }
  double total = 0.0;
  for (int k = 0; k < m; ++k) {
    if (bins[k] < 0 || bins[k] >= kNumBins) {
      throw UsageError("policy head: bin index out of range");
    }
    total += LogSoftmaxBlock(logits, k)[bins[k]];
  }
  return total;
}

double Entropy(const Eigen::VectorXd& logits) {
  const int m = NumCoords(logits);
  double total = 0.0;
  for (int k = 0; k < m; ++k) total += BlockEntropy(LogSoftmaxBlock(logits, k));
  return total;
}

Eigen::VectorXd LogProbGradient(const Eigen::VectorXd& logits,
                                const std::vector<int>& bins) {
  const int m = NumCoords(logits);
  if (static_cast<int>(bins.size()) != m) {
    throw UsageError("policy head: action has wrong number of coordinates");
  }
  Eigen::VectorXd g = -Softmax(logits);
  for (int k = 0; k < m; ++k) g[k * kNumBins + bins[k]] += 1.0;
  return g;
}

Eigen::VectorXd EntropyGradient(const Eigen::VectorXd& logits) {
  const int m = NumCoords(logits);
  Eigen::VectorXd g(logits.size());
  for (int k = 0; k < m; ++k) {
    const auto logp = LogSoftmaxBlock(logits, k);
    const double h = BlockEntropy(logp);
    for (int j = 0; j < kNumBins; ++j) {
      const double p = std::exp(logp[j]);
      g[k * kNumBins + j] = p > 0.0 ? -p * (logp[j] + h) : 0.0;
    }
  }
  return g;
}

}  // namespace dexsim::nn
