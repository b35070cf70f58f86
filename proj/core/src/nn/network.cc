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

#include "dexsim/nn/network.h"

#include <atomic>
#include <cmath>
#include <string>

#include "dexsim/common/errors.h"

namespace dexsim::nn {

namespace {

std::atomic<std::uint64_t> g_next_version{1};

std::uint64_t NextVersion() { return g_next_version.fetch_add(1); }

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Eigen::Index NetShape::NumParams() const {
  const Eigen::Index d = input, h = hidden, r = lstm, o = output;
  return h * d + h + 4 * r * h + 4 * r * r + 4 * r + o * r + o;
}

HiddenState HiddenState::Zero(int size) {
  return {Eigen::VectorXd::Zero(size), Eigen::VectorXd::Zero(size)};
}

Network::Network(const NetShape& shape)
    : shape_(shape),
      params_(Eigen::VectorXd::Zero(shape.NumParams())),
      version_(NextVersion()) {
  if (shape.input < 1 || shape.hidden < 1 || shape.lstm < 1 ||
      shape.output < 1) {
    throw UsageError("network dimensions must be >= 1");
  }
}

Network Network::Initialized(const NetShape& shape, Rng& rng) {
  Network net(shape);
  Eigen::VectorXd& p = net.mutable_params();
  const Offsets off = net.offsets();
  const double dense_bound = 1.0 / std::sqrt(shape.input);
  for (Eigen::Index i = off.dense_w; i < off.dense_b; ++i) {
    p[i] = Uniform(rng, -dense_bound, dense_bound);
  }
  for (Eigen::Index i = off.dense_b; i < off.lstm_wx; ++i) {
    p[i] = Uniform(rng, -dense_bound, dense_bound);
  }
  const double x_bound = 1.0 / std::sqrt(shape.hidden);
  for (Eigen::Index i = off.lstm_wx; i < off.lstm_wh; ++i) {
    p[i] = Uniform(rng, -x_bound, x_bound);
  }
  const double h_bound = 1.0 / std::sqrt(shape.lstm);
  for (Eigen::Index i = off.lstm_wh; i < off.lstm_b; ++i) {
    p[i] = Uniform(rng, -h_bound, h_bound);
  }
  // Gate order (i, f, g, o); forget bias +1.
  p.segment(off.lstm_b + shape.lstm, shape.lstm).setOnes();
  return net;
}

Eigen::VectorXd& Network::mutable_params() {
  version_ = NextVersion();
  return params_;
}

Network::Offsets Network::offsets() const {
  const Eigen::Index d = shape_.input, h = shape_.hidden, r = shape_.lstm,
                     o = shape_.output;
  Offsets off;
  off.dense_w = 0;
  off.dense_b = off.dense_w + h * d;
  off.lstm_wx = off.dense_b + h;
  off.lstm_wh = off.lstm_wx + 4 * r * h;
  off.lstm_b = off.lstm_wh + 4 * r * r;
  off.head_w = off.lstm_b + 4 * r;
  off.head_b = off.head_w + o * r;
  off.end = off.head_b + o;
  return off;
}

Network::ConstMat Network::dense_w() const {
  return ConstMat(params_.data() + offsets().dense_w, shape_.hidden,
                  shape_.input);
}
Network::ConstVec Network::dense_b() const {
  return ConstVec(params_.data() + offsets().dense_b, shape_.hidden);
}
Network::ConstMat Network::lstm_wx() const {
  return ConstMat(params_.data() + offsets().lstm_wx, 4 * shape_.lstm,
                  shape_.hidden);
}
Network::ConstMat Network::lstm_wh() const {
  return ConstMat(params_.data() + offsets().lstm_wh, 4 * shape_.lstm,
                  shape_.lstm);
}
Network::ConstVec Network::lstm_b() const {
  return ConstVec(params_.data() + offsets().lstm_b, 4 * shape_.lstm);
}
Network::ConstMat Network::head_w() const {
  return ConstMat(params_.data() + offsets().head_w, shape_.output,
                  shape_.lstm);
}
Network::ConstVec Network::head_b() const {
  return ConstVec(params_.data() + offsets().head_b, shape_.output);
}

Eigen::MatrixXd Network::Forward(const Eigen::MatrixXd& inputs,
                                 const HiddenState& h0, HiddenState* h_final,
                                 ForwardCache* cache) const {
  const int r = shape_.lstm;
  const Eigen::Index steps = inputs.cols();
  if (inputs.rows() != shape_.input) {
    throw UsageError("dense layer: expected input width " +
                     std::to_string(shape_.input) + ", got " +
                     std::to_string(inputs.rows()));
  }
  if (steps < 1) throw UsageError("forward pass needs at least one step");
  if (h0.c.size() != r || h0.h.size() != r) {
    throw UsageError("lstm layer: initial state has wrong size");
  }

  Eigen::MatrixXd dense_pre = dense_w() * inputs;
  dense_pre.colwise() += dense_b();
  Eigen::MatrixXd dense_out = dense_pre.cwiseMax(0.0);
  Eigen::MatrixXd gates_x = lstm_wx() * dense_out;
  gates_x.colwise() += lstm_b();

  Eigen::MatrixXd gates(4 * r, steps);
  Eigen::MatrixXd cells(r, steps + 1), hiddens(r, steps + 1);
  Eigen::MatrixXd cell_tanh(r, steps);
  cells.col(0) = h0.c;
  hiddens.col(0) = h0.h;
  const auto wh = lstm_wh();
  for (Eigen::Index t = 0; t < steps; ++t) {
    Eigen::VectorXd z = gates_x.col(t) + wh * hiddens.col(t);
    for (int k = 0; k < r; ++k) {
      z[k] = Sigmoid(z[k]);
      z[r + k] = Sigmoid(z[r + k]);
      z[2 * r + k] = std::tanh(z[2 * r + k]);
      z[3 * r + k] = Sigmoid(z[3 * r + k]);
    }
    gates.col(t) = z;
    for (int k = 0; k < r; ++k) {
      const double c = z[r + k] * cells(k, t) + z[k] * z[2 * r + k];
      cells(k, t + 1) = c;
      const double tc = std::tanh(c);
      cell_tanh(k, t) = tc;
      hiddens(k, t + 1) = z[3 * r + k] * tc;
    }
  }

  Eigen::MatrixXd outputs = head_w() * hiddens.rightCols(steps);
  outputs.colwise() += head_b();

  if (h_final) {
    h_final->c = cells.col(steps);
    h_final->h = hiddens.col(steps);
  }
  if (cache) {
    cache->version = version_;
    cache->owner = this;
    cache->inputs = inputs;
    cache->dense_pre = std::move(dense_pre);
    cache->dense_out = std::move(dense_out);
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->hiddens = std::move(hiddens);
    cache->cell_tanh = std::move(cell_tanh);
  }
  return outputs;
}

void Network::Step(const Eigen::VectorXd& input, HiddenState& state,
                   Eigen::VectorXd& output) const {
  const int r = shape_.lstm;
  if (input.size() != shape_.input) {
    throw UsageError("dense layer: expected input width " +
                     std::to_string(shape_.input));
  }
  Eigen::VectorXd a = (dense_w() * input + dense_b()).cwiseMax(0.0);
  Eigen::VectorXd z = lstm_wx() * a + lstm_wh() * state.h + lstm_b();
  for (int k = 0; k < r; ++k) {
    const double i = Sigmoid(z[k]);
    const double f = Sigmoid(z[r + k]);
    const double g = std::tanh(z[2 * r + k]);
    const double o = Sigmoid(z[3 * r + k]);
    const double c = f * state.c[k] + i * g;
    state.c[k] = c;
    state.h[k] = o * std::tanh(c);
  }
  output = head_w() * state.h + head_b();
}

Gradients Network::Backward(const ForwardCache& cache,
                            const Eigen::MatrixXd& d_outputs,
                            const HiddenState* d_final) const {
  if (cache.owner != this || cache.version != version_) {
    throw UsageError("stale forward cache: parameters changed since forward");
  }
  const int r = shape_.lstm;
  const Eigen::Index steps = cache.inputs.cols();
  if (d_outputs.rows() != shape_.output || d_outputs.cols() != steps) {
    throw UsageError("head layer: output gradient has wrong shape");
  }

  Gradients grads;
  grads.params = Eigen::VectorXd::Zero(params_.size());
  const Offsets off = offsets();
  Eigen::Map<Eigen::MatrixXd> g_dense_w(grads.params.data() + off.dense_w,
                                        shape_.hidden, shape_.input);
  Eigen::Map<Eigen::VectorXd> g_dense_b(grads.params.data() + off.dense_b,
                                        shape_.hidden);
  Eigen::Map<Eigen::MatrixXd> g_wx(grads.params.data() + off.lstm_wx, 4 * r,
                                   shape_.hidden);
  Eigen::Map<Eigen::MatrixXd> g_wh(grads.params.data() + off.lstm_wh, 4 * r,
                                   r);
  Eigen::Map<Eigen::VectorXd> g_lb(grads.params.data() + off.lstm_b, 4 * r);
  Eigen::Map<Eigen::MatrixXd> g_head_w(grads.params.data() + off.head_w,
                                       shape_.output, r);
  Eigen::Map<Eigen::VectorXd> g_head_b(grads.params.data() + off.head_b,
                                       shape_.output);

  g_head_w = d_outputs * cache.hiddens.rightCols(steps).transpose();
  g_head_b = d_outputs.rowwise().sum();
  Eigen::MatrixXd d_hidden = head_w().transpose() * d_outputs;  // R x T

  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(r);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(r);
  if (d_final) {
    dh_next = d_final->h;
    dc_next = d_final->c;
  }
  Eigen::MatrixXd dz_all(4 * r, steps);
  const auto wh = lstm_wh();
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    Eigen::VectorXd dh = d_hidden.col(t) + dh_next;
    Eigen::VectorXd dz(4 * r);
    for (int k = 0; k < r; ++k) {
      const double i = cache.gates(k, t);
      const double f = cache.gates(r + k, t);
      const double g = cache.gates(2 * r + k, t);
      const double o = cache.gates(3 * r + k, t);
      const double tc = cache.cell_tanh(k, t);
      const double dc = dh[k] * o * (1.0 - tc * tc) + dc_next[k];
      dz[k] = dc * g * i * (1.0 - i);
      dz[r + k] = dc * cache.cells(k, t) * f * (1.0 - f);
      dz[2 * r + k] = dc * i * (1.0 - g * g);
      dz[3 * r + k] = dh[k] * tc * o * (1.0 - o);
      dc_next[k] = dc * f;
    }
    dz_all.col(t) = dz;
    dh_next = wh.transpose() * dz;
  }
  g_wx = dz_all * cache.dense_out.transpose();
  g_wh = dz_all * cache.hiddens.leftCols(steps).transpose();
  g_lb = dz_all.rowwise().sum();

  Eigen::MatrixXd d_dense = lstm_wx().transpose() * dz_all;
  d_dense = d_dense.cwiseProduct(
      (cache.dense_pre.array() > 0.0).cast<double>().matrix());
  g_dense_w = d_dense * cache.inputs.transpose();
  g_dense_b = d_dense.rowwise().sum();

  grads.h0.h = dh_next;
  grads.h0.c = dc_next;
  return grads;
}

}  // namespace dexsim::nn
