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

#include "dexsim/rl/normalizer.h"

#include <string>

#include "dexsim/common/errors.h"

namespace dexsim::rl {

RunningNormalizer::RunningNormalizer(int dim, double clip)
    : clip_(clip),
      mean_(Eigen::VectorXd::Zero(dim)),
      m2_(Eigen::VectorXd::Zero(dim)) {
  if (dim < 1) throw UsageError("normalizer: dimension must be >= 1");
  if (!(clip > 0.0)) throw UsageError("normalizer: clip must be > 0");
}

void RunningNormalizer::Update(const Eigen::MatrixXd& batch) {
  if (batch.rows() != dim()) {
    throw UsageError("normalizer: expected dimension " +
                     std::to_string(dim()) + ", got " +
                     std::to_string(batch.rows()));
  }
  if (batch.cols() == 0) throw UsageError("normalizer: empty batch");
  const double nb = static_cast<double>(batch.cols());
  const Eigen::VectorXd mean_b = batch.rowwise().mean();
  const Eigen::VectorXd m2_b =
      (batch.colwise() - mean_b).array().square().rowwise().sum();
  const double total = count_ + nb;
  const Eigen::VectorXd delta = mean_b - mean_;
  mean_ += delta * (nb / total);
  m2_ += m2_b + delta.cwiseProduct(delta) * (count_ * nb / total);
  count_ = total;
}

Eigen::VectorXd RunningNormalizer::variance() const {
  if (count_ <= 0.0) return Eigen::VectorXd::Ones(dim());
  return m2_ / count_;
}

Eigen::VectorXd RunningNormalizer::stddev() const {
  return variance().cwiseSqrt().cwiseMax(kStdFloor);
}

Eigen::VectorXd RunningNormalizer::Apply(const Eigen::VectorXd& x) const {
  if (count_ < 1.0) throw UsageError("normalizer: no statistics yet");
  if (x.size() != dim()) {
    throw UsageError("normalizer: expected dimension " +
                     std::to_string(dim()) + ", got " +
                     std::to_string(x.size()));
  }
  return ((x - mean_).array() / stddev().array()).cwiseMax(-clip_).cwiseMin(
      clip_);
}

Eigen::MatrixXd RunningNormalizer::ApplyColumns(
    const Eigen::MatrixXd& x) const {
  if (count_ < 1.0) throw UsageError("normalizer: no statistics yet");
  if (x.rows() != dim()) throw UsageError("normalizer: dimension mismatch");
  const Eigen::VectorXd inv = stddev().cwiseInverse();
  Eigen::MatrixXd out = (x.colwise() - mean_);
  out = inv.asDiagonal() * out;
  return out.cwiseMax(-clip_).cwiseMin(clip_);
}

Eigen::VectorXd RunningNormalizer::Denormalize(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw UsageError("normalizer: dimension mismatch");
  return x.cwiseProduct(stddev()) + mean_;
}

double RunningNormalizer::Apply1(double x) const {
  return Apply(Eigen::VectorXd::Constant(1, x))[0];
}

double RunningNormalizer::Denormalize1(double x) const {
  return Denormalize(Eigen::VectorXd::Constant(1, x))[0];
}

void RunningNormalizer::Write(BinaryWriter& out) const {
  out.Str("normalizer");
  out.F64(count_);
  out.F64(clip_);
  out.Vec(mean_);
  out.Vec(m2_);
}

RunningNormalizer RunningNormalizer::Read(BinaryReader& in) {
  if (in.Str() != "normalizer") {
    throw FormatError("checkpoint: expected section 'normalizer'");
  }
  RunningNormalizer n;
  n.count_ = in.F64();
  n.clip_ = in.F64();
  n.mean_ = in.Vec();
  n.m2_ = in.Vec();
  if (n.mean_.size() != n.m2_.size()) {
    throw FormatError("checkpoint: inconsistent normalizer");
  }
  return n;
}

}  // namespace dexsim::rl
