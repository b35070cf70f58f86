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

#ifndef DEXSIM_NN_CHECKPOINT_H_
#define DEXSIM_NN_CHECKPOINT_H_

#include "dexsim/common/binary_io.h"
#include "dexsim/nn/adam.h"
#include "dexsim/nn/network.h"

namespace dexsim::nn {

// Tagged binary sections; doubles are stored as raw bits so a round trip is
// exact.
void WriteNetwork(BinaryWriter& out, const Network& net);
Network ReadNetwork(BinaryReader& in);

void WriteAdam(BinaryWriter& out, const AdamState& state);
AdamState ReadAdam(BinaryReader& in);

}  // namespace dexsim::nn

#endif  // DEXSIM_NN_CHECKPOINT_H_
