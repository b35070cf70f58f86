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

#include "dexsim/rl/ppo.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dexsim/common/errors.h"

namespace dexsim::rl {

void PpoConfig::Validate() const {
  if (!(clip_epsilon > 0.0)) throw ConfigError("ppo: clip epsilon must be > 0");
  if (!(entropy_coef >= 0.0) || !(value_coef >= 0.0)) {
    throw ConfigError("ppo: loss coefficients must be >= 0");
  }
  if (chunks_per_minibatch < 1) {
    throw ConfigError("ppo: chunks per minibatch must be >= 1");
  }
  if (epochs < 1) throw ConfigError("ppo: epochs must be >= 1");
}

PpoResult PpoLoss(const PpoInputs& in, const PpoConfig& config) {
  const std::size_t n = in.logp_new.size();
  if (n == 0) throw UsageError("ppo: empty minibatch");
  if (in.logp_old.size() != n || in.advantages.size() != n ||
      in.values_pred.size() != n || in.value_targets.size() != n ||
      in.entropy.size() != n) {
    throw UsageError("ppo: inputs differ in length");
  }
  PpoResult out;
  out.d_logp_new.assign(n, 0.0);
  out.d_values_pred.assign(n, 0.0);
  out.d_entropy.assign(n, -config.entropy_coef / static_cast<double>(n));
  const double inv_n = 1.0 / static_cast<double>(n);
  const double lo = 1.0 - config.clip_epsilon, hi = 1.0 + config.clip_epsilon;
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double vals[] = {in.logp_new[i], in.logp_old[i], in.advantages[i],
                           in.values_pred[i], in.value_targets[i],
                           in.entropy[i]};
    for (double v : vals) {
      if (!std::isfinite(v)) {
        throw NumericalError("ppo: non-finite input at sample " +
                                 std::to_string(i),
                             static_cast<int>(i));
      }
    }
    const double diff = in.logp_new[i] - in.logp_old[i];
    const double rho = std::exp(diff);
    const double a = in.advantages[i];
    const double unclipped = rho * a;
    const double clipped_term = std::clamp(rho, lo, hi) * a;
    if (rho < lo || rho > hi) ++clipped;
    if (unclipped <= clipped_term) {
      out.surrogate += unclipped;
      out.d_logp_new[i] = -unclipped * inv_n;
    } else {
      out.surrogate += clipped_term;
    }
    const double err = in.values_pred[i] - in.value_targets[i];
    out.value_loss += err * err;
    out.d_values_pred[i] = 2.0 * config.value_coef * err * inv_n;
    out.mean_entropy += in.entropy[i];
    out.approx_kl -= diff;
  }
  out.surrogate *= inv_n;
  out.value_loss *= inv_n;
  out.mean_entropy *= inv_n;
  out.approx_kl *= inv_n;
  out.clip_fraction = static_cast<double>(clipped) * inv_n;
  out.loss = -out.surrogate + config.value_coef * out.value_loss -
             config.entropy_coef * out.mean_entropy;
  return out;
}

std::vector<double> NormalizeAdvantages(
    const std::vector<double>& advantages) {
  const std::size_t n = advantages.size();
  if (n < 2) throw UsageError("advantage normalization needs >= 2 samples");
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  var /= static_cast<double>(n);
  const double stddev = std::max(std::sqrt(var), 1e-8);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (advantages[i] - mean) / stddev;
  return out;
}

}  // namespace dexsim::rl
