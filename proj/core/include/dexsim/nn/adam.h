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

#ifndef DEXSIM_NN_ADAM_H_
#define DEXSIM_NN_ADAM_H_

#include <cstdint>

#include <Eigen/Core>

namespace dexsim::nn {

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t step = 0;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState ForSize(Eigen::Index n, double learning_rate = 3e-4);
};

// One bias-corrected Adam update in place. A gradient with any non-finite
// entry throws NumericalError (index = first offending entry) and leaves
// params and state untouched.
void AdamStep(Eigen::VectorXd& params, const Eigen::VectorXd& grads,
              AdamState& state);

}  // namespace dexsim::nn

#endif  // DEXSIM_NN_ADAM_H_
