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

#ifndef DEXSIM_COMMON_TEXT_FORMAT_H_
#define DEXSIM_COMMON_TEXT_FORMAT_H_

#include <span>
#include <string>

namespace dexsim {

// 17 significant digits; parses back to the identical double.
std::string FormatDouble(double value);

// JSON array of FormatDouble values: [a,b,c]
std::string FormatArray(std::span<const double> values);
std::string FormatIntArray(std::span<const int> values);

// Escapes a string as a JSON string literal (with quotes).
std::string QuoteJson(const std::string& text);

}  // namespace dexsim

#endif  // DEXSIM_COMMON_TEXT_FORMAT_H_
