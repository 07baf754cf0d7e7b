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

// Reference solvers used to check PIPG. None of them shares PIPG's iteration
// code; only the set projections are common.

#include <cstdint>
#include <vector>

#include "pipg/problem.hpp"

namespace pipg {

struct KktSolution {
  Vector z;
  Vector w;
};

// Solves [[P, H^T], [H, 0]] (z, w) = (-q, g) with a dense LU. D must consist
// of FullSpace blocks only, and n + m <= 2000. Throws SingularSystem if the
// KKT matrix is singular.
KktSolution kkt_direct_solve(const CanonicalProblem& prob);

struct SplittingOptions {
  double tol = 1e-10;
  std::int64_t max_iters = 200000;
  // Initial penalty; 0 picks the mean diagonal of P.
  double rho = 0.0;
  // Residual balancing of rho every this many iterations (0 disables).
  std::int64_t rho_update_interval = 50;
};

struct SplittingResult {
  Vector z;
  std::int64_t iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

// Scaled ADMM on  min 1/2 z^T P z + q^T z  s.t. H z = g, z = y, y in D.
// The z-update solves the equality-constrained KKT system with a sparse LU;
// the y-update projects onto D. Throws OracleFailure if the residuals do not
// drop below tol (relative to the iterate scale) within max_iters.
SplittingResult splitting_reference_solve(const CanonicalProblem& prob,
                                          const SplittingOptions& opts = {});

// Dykstra's alternating projections onto the intersection of sets over the
// same coordinates. Stops when one sweep moves the iterate by <= tol (inf
// norm). Throws OracleFailure after max_iters sweeps.
Vector dykstra_project(const Vector& z, const std::vector<SetDescriptor>& sets,
                       double tol = 1e-13, std::int64_t max_iters = 100000);

}  // namespace pipg
