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

#ifndef DEXSIM_SYSID_SENSOR_MAP_H_
#define DEXSIM_SYSID_SENSOR_MAP_H_

#include <vector>

namespace dexsim::sysid {

// Piecewise-linear map from a raw joint-sensor reading to an angle (rad).
// Linear extrapolation beyond the end knots.
struct SensorMap {
  std::vector<double> raw;    // strictly increasing, 3 to 5 knots
  std::vector<double> angle;  // fitted values at the knots

  double operator()(double reading) const;
  void Validate() const;
};

// Knots at evenly spaced sample quantiles of `raw`; knot angles by linear
// least squares of the interpolant against `truth`.
SensorMap FitSensorMap(const std::vector<double>& raw,
                       const std::vector<double>& truth, int knot_count);

}  // namespace dexsim::sysid

#endif  // DEXSIM_SYSID_SENSOR_MAP_H_
