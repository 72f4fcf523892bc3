// Copyright 2026 The bellsim Authors
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

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace bellsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default directory for output artifacts.
inline constexpr const char* kOutputDirEnv = "BELLSIM_OUTPUT_DIR";

/// Runs one subcommand. `args` excludes the program name. Artifacts go to
/// --out (or $BELLSIM_OUTPUT_DIR, or `out` when neither is set); the human
/// summary goes to `out`, or to `err` when the artifact already went to `out`.
///
/// Returns 0 on success, 1 when a scientific check fails, 2 on usage, config
/// or IO errors.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace bellsim::cli
