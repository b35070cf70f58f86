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

#ifndef DEXSIM_RAND_RANDOMIZED_ENV_H_
#define DEXSIM_RAND_RANDOMIZED_ENV_H_

#include <array>
#include <cstdint>

#include "dexsim/common/binary_io.h"
#include "dexsim/common/rng.h"
#include "dexsim/env/observations.h"
#include "dexsim/env/toy_env.h"
#include "dexsim/rand/layers.h"
#include "dexsim/rand/randomization_spec.h"

namespace dexsim::rand {

// Stream ids: one independent generator per layer plus one for the
// environment itself (goals, warm-up).
enum Stream : std::uint64_t {
  kEnvStream = 0,
  kPhysicalStream,
  kObservationStream,
  kDropoutStream,
  kActionNoiseStream,
  kTimingStream,
  kForceStream,
  kNumStreams
};

// The toy environment wrapped in the full randomization stack. With every
// layer disabled it reproduces ToyEnv(base, MakeRng(seed, {kEnvStream}))
// bit for bit.
class RandomizedEnv {
 public:
  RandomizedEnv(env::EnvParams base, RandomizationSpec spec);

  struct StepOutput {
    env::ObservationPair obs;  // observation after the step
    env::StepResult result;
    env::Substeps substeps;
    JointVector executed_action;  // after noise, delay and backlash
  };

  env::ObservationPair Reset(std::uint64_t episode_seed);
  StepOutput Step(const env::Bins& bins);

  const env::EnvState& state() const { return state_; }
  const EpisodeNoiseState& noise() const { return noise_; }
  const env::EnvParams& base_params() const { return base_; }
  const RandomizationSpec& spec() const { return spec_; }

  void Save(BinaryWriter& out) const;
  void Load(BinaryReader& in);

 private:
  env::ObservationPair Observe(double dt);

  env::EnvParams base_;
  RandomizationSpec spec_;
  EpisodeNoiseState noise_;
  env::EnvState state_;
  std::array<Rng, kNumStreams> streams_;
};

}  // namespace dexsim::rand

#endif  // DEXSIM_RAND_RANDOMIZED_ENV_H_
