/* Copyright 2026 The costtune Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef COSTTUNE_CLI_HPP_
#define COSTTUNE_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace costtune {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;

// Entry point of the `costtune` tool; `args` excludes the program name.
// Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace costtune

#endif  // COSTTUNE_CLI_HPP_
