// Copyright 2026 The rdpacct Authors
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

// Command-line front end: bound | convert | compose | compare | simulate | oracle.
//
// Exit codes: 0 ok, 1 invariant-check failure, 2 usage or validation error.
// Data files are CSV with a header row, LF line endings and %.14e numbers.

#ifndef RDPACCT_CLI_HPP_
#define RDPACCT_CLI_HPP_

#include <ostream>
#include <string>

namespace rdpacct {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Formats a number the way every CSV column does.
std::string format_number(double v);

/// Parses argv (argv[0] is the program name) and runs one subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rdpacct

#endif  // RDPACCT_CLI_HPP_
