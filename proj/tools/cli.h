// Copyright 2026 The aklt-mqc Authors
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

#ifndef AKLT_TOOLS_CLI_H
#define AKLT_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

namespace aklt_cli {

/// Exit statuses of the aklt tool.
enum ExitCode : int { EXIT_OK = 0, EXIT_INVALID = 1, EXIT_PROTOCOL = 2 };

/// Environment variable naming the directory used when --out is not given.
constexpr const char *OUTPUT_DIR_ENV = "AKLT_OUTPUT_DIR";

/// Runs the tool with `args` (without the program name). Artifacts go to `out` unless --out or the
/// output directory variable redirect them; progress and JSON error bodies go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace aklt_cli

#endif
