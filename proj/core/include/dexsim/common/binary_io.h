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

#ifndef DEXSIM_COMMON_BINARY_IO_H_
#define DEXSIM_COMMON_BINARY_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dexsim {

// Little-endian raw dumps; doubles are stored bit-for-bit.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void U64(std::uint64_t v);
  void I64(std::int64_t v);
  void F64(double v);
  void Str(const std::string& s);
  void Vec(const Eigen::VectorXd& v);
  void Mat(const Eigen::MatrixXd& m);
  void Doubles(const std::vector<double>& v);
  void Ints(const std::vector<int>& v);

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  std::uint64_t U64();
  std::int64_t I64();
  double F64();
  std::string Str();
  Eigen::VectorXd Vec();
  Eigen::MatrixXd Mat();
  std::vector<double> Doubles();
  std::vector<int> Ints();

 private:
  void Read(void* dst, std::size_t n);
  std::istream& in_;
};

}  // namespace dexsim

#endif  // DEXSIM_COMMON_BINARY_IO_H_
