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

#include "dexsim/rl/gae.h"

#include <string>

#include "dexsim/common/errors.h"

namespace dexsim::rl {

void GaeConfig::Validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ConfigError("gae: gamma must lie in [0, 1]");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("gae: lambda must lie in [0, 1]");
  }
}

GaeResult ComputeGae(const std::vector<double>& rewards,
                     const std::vector<double>& values, TerminalKind kind,
                     const GaeConfig& config) {
  const std::size_t n = rewards.size();
  if (values.size() != n + 1) {
    throw UsageError("gae: expected " + std::to_string(n + 1) +
                     " values for " + std::to_string(n) + " rewards, got " +
                     std::to_string(values.size()));
  }
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.value_targets.assign(n, 0.0);
  const double decay = config.gamma * config.lambda;
  double next_value = kind == TerminalKind::kTerminal ? 0.0 : values[n];
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double delta = rewards[i] + config.gamma * next_value - values[i];
    running = delta + decay * running;
    out.advantages[i] = running;
    out.value_targets[i] = running + values[i];
    next_value = values[i];
  }
  return out;
}

}  // namespace dexsim::rl
