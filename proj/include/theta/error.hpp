// Copyright 2026 The theta Authors
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

#ifndef THETA_ERROR_HPP
#define THETA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace theta {

// Raised when an operation is applied outside its mathematical domain
// (inverting zero, a character evaluated at zero, a singular matrix, ...).
class MathError : public std::domain_error {
 public:
  explicit MathError(const std::string& what) : std::domain_error(what) {}
};

// Raised for invalid parameters: bad (p, m, n), malformed polynomial strings,
// unknown suite names.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace theta

#endif  // THETA_ERROR_HPP
