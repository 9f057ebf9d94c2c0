//
// Copyright 2026 The nerstress Authors
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
//

#ifndef NERSTRESS_TOOLS_COMMANDS_H_
#define NERSTRESS_TOOLS_COMMANDS_H_

#include <iostream>
#include <string>
#include <vector>

namespace nerstress::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitExternal = 3,
};

// Runs the command line `args` (args[0] is the program name). Corpus "-"
// paths read `in` / write `out`; diagnostics go to `err`.
int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace nerstress::cli

#endif  // NERSTRESS_TOOLS_COMMANDS_H_
