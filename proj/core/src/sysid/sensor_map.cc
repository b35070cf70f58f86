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

#include "dexsim/sysid/sensor_map.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "dexsim/common/errors.h"

namespace dexsim::sysid {

namespace {

// Segment index and interpolation weight of `x` (clamped to the end pieces).
std::pair<std::size_t, double> Locate(const std::vector<double>& knots,
                                      double x) {
  const std::size_t last = knots.size() - 2;
  std::size_t k = 0;
  while (k < last && x > knots[k + 1]) ++k;
  const double w = (x - knots[k]) / (knots[k + 1] - knots[k]);
  return {k, w};
}

}  // namespace

void SensorMap::Validate() const {
  if (raw.size() < 3 || raw.size() > 5 || angle.size() != raw.size()) {
    throw UsageError("sensor map needs 3 to 5 knots");
  }
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!(raw[i] > raw[i - 1])) {
      throw UsageError("sensor map knots must be strictly increasing");
    }
  }
}

double SensorMap::operator()(double reading) const {
  const auto [k, w] = Locate(raw, reading);
  return (1.0 - w) * angle[k] + w * angle[k + 1];
}

SensorMap FitSensorMap(const std::vector<double>& raw,
                       const std::vector<double>& truth, int knot_count) {
  if (knot_count < 3 || knot_count > 5) {
    throw UsageError("knot count must lie in [3, 5], got " +
                     std::to_string(knot_count));
  }
  if (raw.size() != truth.size()) {
    throw UsageError("raw and truth samples differ in length");
  }
  std::vector<double> sorted = raw;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (static_cast<int>(sorted.size()) < knot_count) {
    throw UsageError("degenerate raw spread: " + std::to_string(sorted.size()) +
                     " distinct readings for " + std::to_string(knot_count) +
                     " knots");
  }
  std::vector<double> all = raw;
  std::sort(all.begin(), all.end());
  const std::size_t n = all.size();

  SensorMap map;
  for (int j = 0; j < knot_count; ++j) {
    // Linear-interpolated sample quantile at j / (K - 1).
    const double pos = static_cast<double>(j) * (n - 1) / (knot_count - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, n - 1);
    map.raw.push_back(all[lo] + (pos - lo) * (all[hi] - all[lo]));
  }
  for (std::size_t j = 1; j < map.raw.size(); ++j) {
    if (!(map.raw[j] > map.raw[j - 1])) {
      throw UsageError("degenerate raw spread: coincident quantile knots");
    }
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            knot_count);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto [k, w] = Locate(map.raw, raw[i]);
    a(i, k) = 1.0 - w;
    a(i, k + 1) = w;
    b[i] = truth[i];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  map.angle.assign(x.data(), x.data() + x.size());
  return map;
}

}  // namespace dexsim::sysid
