// Copyright 2026 The covergen Authors
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

#ifndef COVERGEN_CLI_HPP_
#define COVERGEN_CLI_HPP_

#include <ostream>

namespace covergen {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the covergen command line tool. Subcommands: solve, verify,
// analyze, oracle, greedy. Results go to `out` (or --output), progress and
// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace covergen

#endif  // COVERGEN_CLI_HPP_
