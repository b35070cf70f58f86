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

#ifndef DEXSIM_RL_GAE_H_
#define DEXSIM_RL_GAE_H_

#include <vector>

namespace dexsim::rl {

struct GaeConfig {
  double gamma = 0.998;
  double lambda = 0.95;

  void Validate() const;
};

// kTerminal: the segment ends in a true terminal state (object dropped) and
// the value beyond the last reward is taken as zero. kTruncated: the segment
// was cut (timeout, goal limit, batch boundary) and values.back() bootstraps.
enum class TerminalKind { kTerminal, kTruncated };

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> value_targets;
};

// rewards has T entries, values T + 1.
GaeResult ComputeGae(const std::vector<double>& rewards,
                     const std::vector<double>& values, TerminalKind kind,
                     const GaeConfig& config);

}  // namespace dexsim::rl

#endif  // DEXSIM_RL_GAE_H_
