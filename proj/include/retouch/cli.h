// Copyright 2026 The Retouch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "retouch/errors.h"

namespace retouch {

// Process exit statuses of the command-line front end.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kIo = 3;
inline constexpr int kFormat = 4;
inline constexpr int kNumeric = 5;
}  // namespace exit_code

// Exit status for a library error code.
int exit_code_for(ErrorCode code);

// "frame_000001.png" for index 1; indices are 1-based and zero-padded to six
// digits.
std::string frame_name(std::size_t index);

// Runs one subcommand (render, fit, video, multiround, degrade, gen, distill,
// eval). `args` excludes the program name. JSON reports go to `out`,
// diagnostics and progress to `err`. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// argv-style entry point writing to standard output and standard error.
int run_cli(int argc, char** argv);

}  // namespace retouch
