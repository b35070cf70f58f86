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

#ifndef DEXSIM_CONFIG_RANDCHECK_H_
#define DEXSIM_CONFIG_RANDCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dexsim/env/env_params.h"
#include "dexsim/rand/randomization_spec.h"

namespace dexsim::config {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;  // the layer under test is disabled
};

// Monte-Carlo self-check of the randomization layers and the vision
// augmentations. Measured statistics of `spec` are compared against the
// reference table values, so a misconfigured spec fails. Throws
// ConfigError when `samples` < 1.
std::vector<CheckResult> RunRandcheck(const rand::RandomizationSpec& spec,
                                      const env::EnvParams& base, int samples,
                                      std::uint64_t seed);

bool AllPassed(const std::vector<CheckResult>& results);

// "PASS name measured=... expected=... tol=..." per check.
std::string FormatCheck(const CheckResult& result);

}  // namespace dexsim::config

#endif  // DEXSIM_CONFIG_RANDCHECK_H_
