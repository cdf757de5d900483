// Copyright 2026 The wagan Authors.
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

#ifndef WAGAN_CLI_HPP_
#define WAGAN_CLI_HPP_

// Command-line front end: simulate, train, sample, evaluate, qqdata.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace wagan::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitIo = 3,
  kExitNumerical = 4,
};

inline constexpr int kConfigVersion = 1;

enum class Rounding { kNearest, kFloor, kCeil };

// [sqrt(n)] under the given rounding rule, at least 1.
std::size_t sqrt_rule(std::size_t n, Rounding rounding);

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace wagan::cli

#endif  // WAGAN_CLI_HPP_
