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

// QR preconditioning of the equality constraints.
//
// With H^T = Q R (economy QR), H z = g is equivalent to
//   eta Q^T z = eta R^{-T} g,
// whose rows are orthogonal with common length eta. Choosing
// eta = sqrt(lambda_max * lambda_min + lambda_min^2) puts every singular value
// of the new constraint matrix at the minimizer of the KKT condition-number
// bound. The set D is left untouched, so its projections stay closed-form.

#include <memory>

#include "pipg/problem.hpp"

namespace pipg {

struct PreconditionedProblem {
  double eta = 0.0;
  DenseMatrix h_hat;  // eta * Q^T, dense (QR fills in)
  Vector g_hat;       // eta * R^{-T} g
  std::shared_ptr<const CanonicalProblem> source;

  // The equivalent problem (P, q, H_hat, g_hat, D).
  CanonicalProblem problem() const;

  // Spectral data of the equivalent problem: P's eigenvalues carry over and
  // sigma = eta^2 exactly.
  SpectralData spectral(const SpectralData& source_spectral) const;
};

// Throws RankDeficiency if H does not have full row rank, and
// ContractViolation if lambda_min <= 0.
PreconditionedProblem qr_precondition(const CanonicalProblem& prob,
                                      const SpectralData& s);

// ||H_hat H_hat^T - eta^2 I||_max
double verify_orthogonality(const PreconditionedProblem& pp);

// Storage accounting with 8-byte values and 8-byte indices.
std::size_t csc_storage_bytes(const SparseMatrixCSC& m);
std::size_t dense_storage_bytes(Index rows, Index cols);

}  // namespace pipg
