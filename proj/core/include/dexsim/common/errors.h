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

#ifndef DEXSIM_COMMON_ERRORS_H_
#define DEXSIM_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dexsim {

// Invalid configuration: unknown keys, bad ranges, unknown parameter paths.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by a caller (shape mismatch, stale cache, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite values produced by a simulation or an optimizer.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int index = -1)
      : std::runtime_error(what), index_(index) {}
  // Substep (or element) index that produced the non-finite value, -1 if n/a.
  int index() const { return index_; }

 private:
  int index_;
};

// Malformed or inconsistent on-disk data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Replay-buffer integrity violations (missing hidden states, stale chunks).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Environment reset could not produce a valid initial state.
class InitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dexsim

#endif  // DEXSIM_COMMON_ERRORS_H_
