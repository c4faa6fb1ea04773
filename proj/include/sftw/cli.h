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

#ifndef SFTW_CLI_H_
#define SFTW_CLI_H_

// Command-line front end: `sftw <ingest|slack|equilibrium|simulate> [flags]`.

#include <ostream>
#include <string>
#include <vector>

namespace sftw {

enum ExitCode {
  kExitOk = 0,
  kExitInputError = 2,
  kExitEmptyResult = 3,
  kExitInvariantViolation = 4,
};

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace sftw

#endif  // SFTW_CLI_H_
