// Copyright 2026 The Counterfactual Importance Authors
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

#ifndef CFI_CLI_H_
#define CFI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace cfi::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kRuntime = 3,
};

// Entry point of the `cfimp` tool. `args` excludes the program name.
// Subcommands: score, eval, gen, render.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cfi::cli

#endif  // CFI_CLI_H_
