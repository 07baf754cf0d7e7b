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

// The canonical problem
//
//   minimize    1/2 z^T P z + q^T z
//   subject to  H z = g,  z in D
//
// with P positive definite, H of full row rank, and D a product of sets with
// closed-form projections.

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>

#include "pipg/linalg.hpp"
#include "pipg/projections.hpp"

namespace pipg {

// Cost Hessian, stored either as its diagonal or as a dense symmetric matrix.
class CostHessian {
 public:
  CostHessian() = default;
  static CostHessian diagonal(Vector diag);
  static CostHessian dense(DenseMatrix p);

  bool is_diagonal() const { return std::holds_alternative<Vector>(data_); }
  Index dim() const;

  const Vector& diag() const { return std::get<Vector>(data_); }
  const DenseMatrix& dense_matrix() const { return std::get<DenseMatrix>(data_); }
  DenseMatrix to_dense() const;

  Vector apply(const Vector& x) const;
  void apply_into(const Vector& x, Vector& out) const;

 private:
  std::variant<Vector, DenseMatrix> data_;
};

struct CanonicalProblem {
  CostHessian p;
  Vector q;
  Matrix h = SparseMatrixCSC();
  Vector g;
  ProductSet d;

  Index n() const { return q.size(); }
  Index m() const { return g.size(); }
};

// Dimensional consistency, finiteness, P positive definite and (when
// check_rank) H of full row rank. Throws ContractViolation or RankDeficiency.
void validate(const CanonicalProblem& prob, bool check_rank = true);

struct SpectralData {
  double lambda_max = 0.0;  // largest eigenvalue of P
  double lambda_min = 0.0;  // smallest eigenvalue of P
  double sigma = 0.0;       // largest eigenvalue of H^T H
  // Smallest nonzero eigenvalue of H H^T (sigma_min^2); only computed on
  // demand, since the solver never needs it.
  std::optional<double> sigma_min;
  // False if any power iteration stopped at its iteration cap.
  bool converged = true;
};

// Diagonal P: exact extremal entries. Dense P: power iteration for the top
// eigenvalue and shifted power iteration on lambda_max*I - P for the bottom
// one. sigma comes from power iteration on x -> H^T (H x), and is left at 0
// when include_sigma is false.
SpectralData spectral_estimates(const CanonicalProblem& prob,
                                std::uint64_t seed = 0,
                                bool include_sigma = true);

// Largest and smallest singular values of H from a dense SVD. Desk-scale
// only.
std::pair<double, double> singular_value_extremes(const Matrix& h);

// spectral_estimates plus sigma_min from the dense SVD.
SpectralData spectral_estimates_with_sigma_min(const CanonicalProblem& prob,
                                               std::uint64_t seed = 0);

struct KktEigenIntervals {
  double neg_lower, neg_upper;  // I^-
  double pos_lower, pos_upper;  // I^+
};

// Eigenvalue inclusion intervals of the KKT matrix [[P, H^T], [H, 0]] given
// the extremal eigenvalues of P and extremal singular values of H.
KktEigenIntervals kkt_eigen_intervals(double lambda_max, double lambda_min,
                                      double sv_max, double sv_min);

// Upper bound on the spectral condition number of the KKT matrix. sv_max and
// sv_min are singular values of H (not squared). Returns +inf when
// sv_min == 0.
double kkt_condition_bound(double lambda_max, double lambda_min, double sv_max,
                           double sv_min);

// Same bound from SpectralData, using sv_max = sqrt(sigma) and
// sv_min = sqrt(*sigma_min). Throws ContractViolation if sigma_min is absent.
double kkt_condition_bound(const SpectralData& s);

// The common singular value of H that minimizes kkt_condition_bound:
// sqrt(lambda_max * lambda_min + lambda_min^2).
double optimal_singular_value(double lambda_max, double lambda_min);

double objective(const CanonicalProblem& prob, const Vector& z);

// 1/2 z^T P z + q^T z + w^T (H z - g)
double lagrangian(const CanonicalProblem& prob, const Vector& z,
                  const Vector& w);

struct ErrorMetrics {
  double opt = 0.0;   // ||z - z*||_inf / ||z*||_inf
  double feas = 0.0;  // ||H z - g||_inf / ||z*||_inf
};

// prob must carry the original (not preconditioned) H and g.
ErrorMetrics error_metrics(const CanonicalProblem& prob, const Vector& z,
                           const Vector& z_star);

// Projected-stationarity residual
//   max(||z - Pi_D[z - a (P z + q + H^T w)]||_inf, ||H z - g||_inf),
// zero exactly at KKT pairs.
double kkt_residual(const CanonicalProblem& prob, const Vector& z,
                    const Vector& w, double alpha_probe);

// Probe step 1 / (lambda_max + sigma).
double default_probe_step(const SpectralData& s);

}  // namespace pipg
