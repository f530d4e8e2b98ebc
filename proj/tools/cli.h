// Copyright 2026 The smatch Authors.
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

#ifndef SMATCH_TOOLS_CLI_H_
#define SMATCH_TOOLS_CLI_H_

#include <iosfwd>

namespace smatch::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitDegenerateSpectrum = 3;
inline constexpr int kExitTooLarge = 4;

// Runs the command line against the given streams and returns the exit
// code. Output files named with --out are written directly.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace smatch::cli

#endif  // SMATCH_TOOLS_CLI_H_
