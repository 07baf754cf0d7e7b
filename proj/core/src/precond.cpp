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
#include "pipg/precond.hpp"

#include <string>

#include "pipg/errors.hpp"

namespace pipg {

CanonicalProblem PreconditionedProblem::problem() const {
  CanonicalProblem out;
  out.p = source->p;
  out.q = source->q;
  out.h = h_hat;
  out.g = g_hat;
  out.d = source->d;
  return out;
}

SpectralData PreconditionedProblem::spectral(
    const SpectralData& source_spectral) const {
  SpectralData s = source_spectral;
  s.sigma = eta * eta;
  s.sigma_min = eta * eta;
  return s;
}

PreconditionedProblem qr_precondition(const CanonicalProblem& prob,
                                      const SpectralData& s) {
  if (!(s.lambda_min > 0.0)) {
    throw ContractViolation("qr_precondition: P must be positive definite");
  }
  PreconditionedProblem pp;
  pp.source = std::make_shared<const CanonicalProblem>(prob);
  pp.eta = optimal_singular_value(s.lambda_max, s.lambda_min);

  if (prob.m() == 0) {
    pp.h_hat = DenseMatrix(0, prob.n());
    pp.g_hat = Vector(0);
    return pp;
  }

  QRFactors qr;
  try {
    qr = qr_economy(to_dense(prob.h).transpose());
  } catch (const RankDeficiency& e) {
    throw RankDeficiency(std::string("qr_precondition: H must have full row rank: ") +
                         e.what());
  }
  pp.h_hat = pp.eta * qr.q.transpose();
  // R^T is lower triangular; one forward substitution gives R^{-T} g.
  pp.g_hat = pp.eta * solve_lower_triangular(qr.r.transpose(), prob.g);
  return pp;
}

double verify_orthogonality(const PreconditionedProblem& pp) {
  const Index m = pp.h_hat.rows();
  if (m == 0) return 0.0;
  const DenseMatrix gram = pp.h_hat * pp.h_hat.transpose();
  return (gram - pp.eta * pp.eta * DenseMatrix::Identity(m, m))
      .cwiseAbs()
      .maxCoeff();
}

std::size_t csc_storage_bytes(const SparseMatrixCSC& m) {
  const auto nnz = static_cast<std::size_t>(m.nonZeros());
  return 8 * nnz + 8 * nnz + 8 * static_cast<std::size_t>(m.cols() + 1);
}

std::size_t dense_storage_bytes(Index rows, Index cols) {
  return 8 * static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

}  // namespace pipg
