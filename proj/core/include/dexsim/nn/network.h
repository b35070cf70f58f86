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

#ifndef DEXSIM_NN_NETWORK_H_
#define DEXSIM_NN_NETWORK_H_

#include <cstdint>

#include <Eigen/Core>

#include "dexsim/common/rng.h"

namespace dexsim::nn {

// input -> dense(hidden) -> ReLU -> LSTM(lstm) -> linear head(output)
struct NetShape {
  int input = 0;
  int hidden = 64;
  int lstm = 32;
  int output = 1;

  Eigen::Index NumParams() const;
  bool operator==(const NetShape&) const = default;
};

struct HiddenState {
  Eigen::VectorXd c;
  Eigen::VectorXd h;

  static HiddenState Zero(int size);
  bool operator==(const HiddenState& other) const {
    return c == other.c && h == other.h;
  }
};

// Activations retained by a forward pass for the matching backward pass.
struct ForwardCache {
  std::uint64_t version = 0;
  const void* owner = nullptr;
  Eigen::MatrixXd inputs;      // D x T
  Eigen::MatrixXd dense_pre;   // H x T
  Eigen::MatrixXd dense_out;   // H x T
  Eigen::MatrixXd gates;       // 4R x T, activated (i, f, g, o)
  Eigen::MatrixXd cells;       // R x (T + 1), column 0 is c0
  Eigen::MatrixXd hiddens;     // R x (T + 1), column 0 is h0
  Eigen::MatrixXd cell_tanh;   // R x T
};

struct Gradients {
  Eigen::VectorXd params;  // same layout as Network::params()
  HiddenState h0;          // gradient w.r.t. the initial state
};

class Network {
 public:
  Network() = default;
  explicit Network(const NetShape& shape);  // all parameters zero

  // Dense, LSTM input and recurrent weights U(+-1/sqrt(fan_in)); forget-gate
  // bias +1; head zero (uniform policy / zero value at start).
  static Network Initialized(const NetShape& shape, Rng& rng);

  const NetShape& shape() const { return shape_; }
  const Eigen::VectorXd& params() const { return params_; }
  // Any write access invalidates outstanding caches.
  Eigen::VectorXd& mutable_params();
  std::uint64_t version() const { return version_; }

  // inputs: D x T, T >= 1. Returns O x T outputs; writes the final state.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& inputs, const HiddenState& h0,
                          HiddenState* h_final, ForwardCache* cache) const;

  // Single-step inference without a cache.
  void Step(const Eigen::VectorXd& input, HiddenState& state,
            Eigen::VectorXd& output) const;

  // Reverse mode through all T steps of `cache`. The initial state is a
  // constant input: its gradient is reported but not propagated further.
  Gradients Backward(const ForwardCache& cache,
                     const Eigen::MatrixXd& d_outputs,
                     const HiddenState* d_final = nullptr) const;

  using ConstMat = Eigen::Map<const Eigen::MatrixXd>;
  using ConstVec = Eigen::Map<const Eigen::VectorXd>;
  ConstMat dense_w() const;
  ConstVec dense_b() const;
  ConstMat lstm_wx() const;
  ConstMat lstm_wh() const;
  ConstVec lstm_b() const;
  ConstMat head_w() const;
  ConstVec head_b() const;

  struct Offsets {
    Eigen::Index dense_w, dense_b, lstm_wx, lstm_wh, lstm_b, head_w, head_b,
        end;
  };
  Offsets offsets() const;

 private:
  NetShape shape_;
  Eigen::VectorXd params_;
  std::uint64_t version_ = 0;
};

}  // namespace dexsim::nn

#endif  // DEXSIM_NN_NETWORK_H_
