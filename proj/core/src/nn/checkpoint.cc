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

#include "dexsim/nn/checkpoint.h"

#include "dexsim/common/errors.h"

namespace dexsim::nn {

namespace {

void Expect(BinaryReader& in, const char* tag) {
  if (in.Str() != tag) {
    throw FormatError(std::string("checkpoint: expected section '") + tag +
                      "'");
  }
}

}  // namespace

void WriteNetwork(BinaryWriter& out, const Network& net) {
  out.Str("network");
  const NetShape& s = net.shape();
  out.I64(s.input);
  out.I64(s.hidden);
  out.I64(s.lstm);
  out.I64(s.output);
  out.Vec(net.params());
}

Network ReadNetwork(BinaryReader& in) {
  Expect(in, "network");
  NetShape s;
  s.input = static_cast<int>(in.I64());
  s.hidden = static_cast<int>(in.I64());
  s.lstm = static_cast<int>(in.I64());
  s.output = static_cast<int>(in.I64());
  Network net(s);
  Eigen::VectorXd p = in.Vec();
  if (p.size() != s.NumParams()) {
    throw FormatError("checkpoint: parameter count does not match shape");
  }
  net.mutable_params() = p;
  return net;
}

void WriteAdam(BinaryWriter& out, const AdamState& state) {
  out.Str("adam");
  out.Vec(state.m);
  out.Vec(state.v);
  out.I64(state.step);
  out.F64(state.learning_rate);
  out.F64(state.beta1);
  out.F64(state.beta2);
  out.F64(state.epsilon);
}

AdamState ReadAdam(BinaryReader& in) {
  Expect(in, "adam");
  AdamState s;
  s.m = in.Vec();
  s.v = in.Vec();
  s.step = in.I64();
  s.learning_rate = in.F64();
  s.beta1 = in.F64();
  s.beta2 = in.F64();
  s.epsilon = in.F64();
  if (s.m.size() != s.v.size() || s.step < 0) {
    throw FormatError("checkpoint: inconsistent adam state");
  }
  return s;
}

}  // namespace dexsim::nn
