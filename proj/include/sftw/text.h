// Copyright 2026 The SFTW Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SFTW_TEXT_H_
#define SFTW_TEXT_H_

// Small helpers for the comma-separated formats.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sftw {

// Strips spaces, tabs, carriage returns and double quotes at both ends.
std::string Trim(std::string_view s);

// Splits on every comma and trims each field. Quoted commas are not
// supported.
std::vector<std::string> SplitCsv(const std::string& line);

// Finite double covering the whole string, or nullopt.
std::optional<double> ParseDouble(const std::string& text);

}  // namespace sftw

#endif  // SFTW_TEXT_H_
