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

#include "dexsim/common/rng.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "dexsim/common/errors.h"

namespace dexsim {

std::uint64_t DeriveSeed(std::uint64_t master,
                         std::initializer_list<std::uint64_t> ids) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (ids.size() + 1));
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  for (std::uint64_t id : ids) push(id);
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Rng MakeRng(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
  return Rng(DeriveSeed(master, ids));
}

double Uniform(Rng& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double Normal(Rng& rng, double mean, double stddev) {
  if (stddev == 0.0) return mean;
  return std::normal_distribution<double>(mean, stddev)(rng);
}

double Exponential(Rng& rng, double rate) {
  return std::exponential_distribution<double>(rate)(rng);
}

bool Bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double LogUniform(Rng& rng, double lo, double hi) {
  return std::exp(Uniform(rng, std::log(lo), std::log(hi)));
}

Eigen::Vector3d NormalVector3(Rng& rng, double stddev) {
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v[i] = Normal(rng, 0.0, stddev);
  return v;
}

Eigen::Vector3d UniformUnitVector3(Rng& rng) {
  while (true) {
    Eigen::Vector3d v = NormalVector3(rng, 1.0);
    double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

std::string SaveRngState(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

Rng LoadRngState(const std::string& text) {
  std::istringstream in(text);
  Rng rng;
  in >> rng;
  if (!in) throw FormatError("corrupt random generator state");
  return rng;
}

}  // namespace dexsim
