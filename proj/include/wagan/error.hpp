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

#ifndef WAGAN_ERROR_HPP_
#define WAGAN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace wagan {

// Argument outside the mathematical domain of an operation (boundary
// simplex points, non-positive scales, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Nonconforming operand shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid user configuration (k2 > k1, batch larger than the pool, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file content (non-numeric cell, ragged row, ...).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An algorithm failed to produce a usable result (optimizer divergence,
// rejection cap hit, failed optimality certificate).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wagan

#endif  // WAGAN_ERROR_HPP_
