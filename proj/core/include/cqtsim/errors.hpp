// Copyright 2026 The cqtsim Authors
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

#ifndef CQTSIM_ERRORS_HPP_
#define CQTSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cqtsim {

/// Invalid configuration: bad parameters, dimension mismatches, malformed
/// experiment definitions. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure at run time (underflow, zero-norm states). CLI maps
/// this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cqtsim

#endif  // CQTSIM_ERRORS_HPP_
