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

#ifndef DEXSIM_RL_NORMALIZER_H_
#define DEXSIM_RL_NORMALIZER_H_

#include <Eigen/Core>

#include "dexsim/common/binary_io.h"

namespace dexsim::rl {

inline constexpr double kNormalizerClip = 5.0;
inline constexpr double kStdFloor = 1e-8;

// Per-dimension running mean and variance merged batch by batch.
class RunningNormalizer {
 public:
  RunningNormalizer() = default;
  explicit RunningNormalizer(int dim, double clip = kNormalizerClip);

  // batch: dim x N, N >= 1.
  void Update(const Eigen::MatrixXd& batch);

  // clamp((x - mean) / max(std, 1e-8), -clip, clip); requires count >= 1.
  Eigen::VectorXd Apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd ApplyColumns(const Eigen::MatrixXd& x) const;
  // Inverse of Apply for unclipped values.
  Eigen::VectorXd Denormalize(const Eigen::VectorXd& x) const;
  double Apply1(double x) const;
  double Denormalize1(double x) const;

  int dim() const { return static_cast<int>(mean_.size()); }
  double count() const { return count_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  // Unit variance before any data has been seen.
  Eigen::VectorXd variance() const;
  Eigen::VectorXd stddev() const;  // floored
  double clip() const { return clip_; }

  void Write(BinaryWriter& out) const;
  static RunningNormalizer Read(BinaryReader& in);

  bool operator==(const RunningNormalizer& o) const {
    return count_ == o.count_ && clip_ == o.clip_ && mean_ == o.mean_ &&
           m2_ == o.m2_;
  }

 private:
  double count_ = 0.0;
  double clip_ = kNormalizerClip;
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;  // sum of squared deviations
};

}  // namespace dexsim::rl

#endif  // DEXSIM_RL_NORMALIZER_H_
