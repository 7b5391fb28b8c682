/*
 Copyright 2026 The groundkit Authors
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace groundkit::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitInternalError = 2,
};

// Entry point for the `groundkit` tool. Data goes to files or `out`,
// diagnostics and usage text to `err`.
int Run(int argc, const char* const* argv, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

// Convenience overload; args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace groundkit::cli
