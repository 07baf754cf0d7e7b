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

// JSON problem files:
//
//   {
//     "n": 3, "m": 1,
//     "P": {"diag": [...]}            | {"dense": [[...], ...]},
//     "q": [...],
//     "H": {"csc": {"colptr": [...], "rowval": [...], "nzval": [...]}}
//                                     | {"dense": [[...], ...]},
//     "g": [...],
//     "D": [{"type": "box", "params": {...}, "range": [begin, end]}, ...]
//   }
//
// Dense matrices are row lists. Ranges are half-open and zero-based.
// Infinite box bounds are written as the strings "inf" / "-inf". Doubles are
// printed with round-trip precision.

#include <filesystem>
#include <string>

#include "pipg/problem.hpp"

namespace pipg {

std::string problem_to_json(const CanonicalProblem& prob, int indent = -1);

// Throws ContractViolation on schema errors.
CanonicalProblem problem_from_json(const std::string& text);

void write_problem(const std::filesystem::path& path,
                   const CanonicalProblem& prob);
CanonicalProblem read_problem(const std::filesystem::path& path);

}  // namespace pipg
