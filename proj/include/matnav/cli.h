// Copyright 2026 The matnav Authors
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

// Command-line front end: run, build-shapes, precompute, bench.

#ifndef MATNAV_CLI_H_
#define MATNAV_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace matnav {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // unreadable input, I/O errors
inline constexpr int kExitSchema = 2;
inline constexpr int kExitCoverage = 3;

/// Runs one command; args exclude the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace matnav

#endif  // MATNAV_CLI_H_
