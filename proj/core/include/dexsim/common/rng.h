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

#ifndef DEXSIM_COMMON_RNG_H_
#define DEXSIM_COMMON_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>

#include <Eigen/Core>

namespace dexsim {

using Rng = std::mt19937_64;

// Derives an independent stream from a master seed and a path of ids
// (e.g. {slot, episode, layer}). Equal inputs give equal streams.
Rng MakeRng(std::uint64_t master, std::initializer_list<std::uint64_t> ids);
std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> ids);

// Distributions are constructed per draw so the generator is the only state
// that has to be checkpointed.
double Uniform(Rng& rng, double lo, double hi);
double Normal(Rng& rng, double mean, double stddev);
// Rate parameterized: mean 1 / rate.
double Exponential(Rng& rng, double rate);
bool Bernoulli(Rng& rng, double p);
int UniformInt(Rng& rng, int lo, int hi);  // inclusive
double LogUniform(Rng& rng, double lo, double hi);

Eigen::Vector3d NormalVector3(Rng& rng, double stddev);
Eigen::Vector3d UniformUnitVector3(Rng& rng);

std::string SaveRngState(const Rng& rng);
Rng LoadRngState(const std::string& text);

}  // namespace dexsim

#endif  // DEXSIM_COMMON_RNG_H_
