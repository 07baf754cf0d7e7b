// Copyright 2026 The PIPG Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pipg {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad dimensions, nonpositive
// radius, zero normal, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A matrix that must have full column (or row) rank does not.
class RankDeficiency : public Error {
 public:
  using Error::Error;
};

// A triangular or KKT system is singular to working precision.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// The iteration produced a non-finite iterate.
class Divergence : public Error {
 public:
  Divergence(const std::string& what, std::int64_t iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

// A reference solver failed to reach its tolerance.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace pipg
