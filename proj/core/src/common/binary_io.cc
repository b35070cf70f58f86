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

#include "dexsim/common/binary_io.h"

#include <cstring>
#include <istream>
#include <ostream>

#include "dexsim/common/errors.h"

namespace dexsim {

namespace {
// Guards against reading garbage lengths from a corrupt file.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;
}  // namespace

void BinaryWriter::U64(std::uint64_t v) {
  out_.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void BinaryWriter::I64(std::int64_t v) {
  out_.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void BinaryWriter::F64(double v) {
  out_.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void BinaryWriter::Str(const std::string& s) {
  U64(s.size());
  out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}
void BinaryWriter::Vec(const Eigen::VectorXd& v) {
  U64(static_cast<std::uint64_t>(v.size()));
  out_.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}
void BinaryWriter::Mat(const Eigen::MatrixXd& m) {
  U64(static_cast<std::uint64_t>(m.rows()));
  U64(static_cast<std::uint64_t>(m.cols()));
  out_.write(reinterpret_cast<const char*>(m.data()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
}
void BinaryWriter::Doubles(const std::vector<double>& v) {
  U64(v.size());
  out_.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}
void BinaryWriter::Ints(const std::vector<int>& v) {
  U64(v.size());
  for (int x : v) I64(x);
}

void BinaryReader::Read(void* dst, std::size_t n) {
  in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (!in_) throw FormatError("unexpected end of binary data");
}
std::uint64_t BinaryReader::U64() {
  std::uint64_t v;
  Read(&v, sizeof(v));
  return v;
}
std::int64_t BinaryReader::I64() {
  std::int64_t v;
  Read(&v, sizeof(v));
  return v;
}
double BinaryReader::F64() {
  double v;
  Read(&v, sizeof(v));
  return v;
}
std::string BinaryReader::Str() {
  std::uint64_t n = U64();
  if (n > kMaxElements) throw FormatError("corrupt string length");
  std::string s(n, '\0');
  if (n) Read(s.data(), n);
  return s;
}
Eigen::VectorXd BinaryReader::Vec() {
  std::uint64_t n = U64();
  if (n > kMaxElements) throw FormatError("corrupt vector length");
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  if (n) Read(v.data(), n * sizeof(double));
  return v;
}
Eigen::MatrixXd BinaryReader::Mat() {
  std::uint64_t r = U64();
  std::uint64_t c = U64();
  if (r > kMaxElements || c > kMaxElements || r * c > kMaxElements) {
    throw FormatError("corrupt matrix shape");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  if (r != 0 && c != 0) Read(m.data(), r * c * sizeof(double));
  return m;
}
std::vector<double> BinaryReader::Doubles() {
  std::uint64_t n = U64();
  if (n > kMaxElements) throw FormatError("corrupt array length");
  std::vector<double> v(n);
  if (n) Read(v.data(), n * sizeof(double));
  return v;
}
std::vector<int> BinaryReader::Ints() {
  std::uint64_t n = U64();
  if (n > kMaxElements) throw FormatError("corrupt array length");
  std::vector<int> v(n);
  for (auto& x : v) x = static_cast<int>(I64());
  return v;
}

}  // namespace dexsim
