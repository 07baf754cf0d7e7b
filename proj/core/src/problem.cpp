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
#include "pipg/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "pipg/errors.hpp"

namespace pipg {
namespace {

double inf_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

}  // namespace

CostHessian CostHessian::diagonal(Vector diag) {
  CostHessian p;
  p.data_ = std::move(diag);
  return p;
}

CostHessian CostHessian::dense(DenseMatrix p) {
  if (p.rows() != p.cols()) throw ContractViolation("P must be square");
  CostHessian out;
  out.data_ = std::move(p);
  return out;
}

Index CostHessian::dim() const {
  if (is_diagonal()) return diag().size();
  return dense_matrix().rows();
}

DenseMatrix CostHessian::to_dense() const {
  if (is_diagonal()) return diag().asDiagonal();
  return dense_matrix();
}

Vector CostHessian::apply(const Vector& x) const {
  Vector out(dim());
  apply_into(x, out);
  return out;
}

void CostHessian::apply_into(const Vector& x, Vector& out) const {
  if (x.size() != dim()) throw ContractViolation("P * x: dimension mismatch");
  if (is_diagonal()) {
    out = diag().cwiseProduct(x);
  } else {
    out.noalias() = dense_matrix() * x;
  }
}

void validate(const CanonicalProblem& prob, bool check_rank) {
  const Index n = prob.n();
  const Index m = prob.m();
  if (prob.p.dim() != n) throw ContractViolation("P is not n x n");
  if (rows(prob.h) != m || cols(prob.h) != n) {
    throw ContractViolation("H is " + std::to_string(rows(prob.h)) + "x" +
                            std::to_string(cols(prob.h)) + ", expected " +
                            std::to_string(m) + "x" + std::to_string(n));
  }
  if (prob.d.dim() != n) {
    throw ContractViolation("D covers " + std::to_string(prob.d.dim()) +
                            " coordinates, expected " + std::to_string(n));
  }
  if (m > n) throw ContractViolation("more equality rows than variables");
  if (!prob.q.allFinite() || !prob.g.allFinite()) {
    throw ContractViolation("non-finite entry in q or g");
  }

  if (prob.p.is_diagonal()) {
    if (!prob.p.diag().allFinite() || (prob.p.diag().array() <= 0.0).any()) {
      throw ContractViolation("diagonal P must have positive finite entries");
    }
  } else {
    const DenseMatrix& p = prob.p.dense_matrix();
    if (!p.allFinite()) throw ContractViolation("non-finite entry in P");
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ContractViolation("P is not symmetric");
    }
    Eigen::LLT<DenseMatrix> llt(p);
    if (llt.info() != Eigen::Success) {
      throw ContractViolation("P is not positive definite");
    }
  }

  if (const auto* hs = std::get_if<SparseMatrixCSC>(&prob.h)) {
    if (!is_canonical_csc(*hs)) {
      throw ContractViolation("sparse H is not in canonical CSC form");
    }
  } else if (!std::get<DenseMatrix>(prob.h).allFinite()) {
    throw ContractViolation("non-finite entry in H");
  }

  if (check_rank && m > 0) {
    (void)qr_economy(to_dense(prob.h).transpose());
  }
}

SpectralData spectral_estimates(const CanonicalProblem& prob,
                                std::uint64_t seed, bool include_sigma) {
  SpectralData s;
  const Index n = prob.n();
  PowerIterationOptions opts;
  opts.seed = seed;

  if (prob.p.is_diagonal()) {
    s.lambda_max = prob.p.diag().maxCoeff();
    s.lambda_min = prob.p.diag().minCoeff();
  } else {
    const DenseMatrix& p = prob.p.dense_matrix();
    auto top = power_iteration_max_eig(
        [&](const Vector& x) -> Vector { return p * x; }, n, opts);
    s.lambda_max = top.eigenvalue;
    const double shift = top.eigenvalue;
    auto bottom = power_iteration_max_eig(
        [&](const Vector& x) -> Vector { return shift * x - p * x; }, n, opts);
    s.lambda_min = shift - bottom.eigenvalue;
    s.converged = top.converged && bottom.converged;
  }

  if (include_sigma && prob.m() > 0) {
    Vector hx(prob.m());
    auto sig = power_iteration_max_eig(
        [&](const Vector& x) -> Vector {
          matvec_into(prob.h, x, Transpose::kNo, hx);
          return matvec(prob.h, hx, Transpose::kYes);
        },
        n, opts);
    s.sigma = sig.eigenvalue;
    s.converged = s.converged && sig.converged;
  }
  return s;
}

std::pair<double, double> singular_value_extremes(const Matrix& h) {
  const DenseMatrix dense = to_dense(h);
  if (dense.size() == 0) return {0.0, 0.0};
  Eigen::BDCSVD<DenseMatrix> svd(dense);
  const Vector& sv = svd.singularValues();
  // Singular values come sorted in decreasing order; for a wide H of full
  // row rank the smallest of the min(m, n) values is the smallest nonzero.
  return {sv(0), sv(sv.size() - 1)};
}

SpectralData spectral_estimates_with_sigma_min(const CanonicalProblem& prob,
                                               std::uint64_t seed) {
  SpectralData s = spectral_estimates(prob, seed);
  const auto [sv_max, sv_min] = singular_value_extremes(prob.h);
  (void)sv_max;
  s.sigma_min = sv_min * sv_min;
  return s;
}

KktEigenIntervals kkt_eigen_intervals(double lambda_max, double lambda_min,
                                      double sv_max, double sv_min) {
  KktEigenIntervals out{};
  out.neg_lower =
      0.5 * (lambda_min - std::sqrt(lambda_min * lambda_min + 4.0 * sv_max * sv_max));
  out.neg_upper =
      0.5 * (lambda_max - std::sqrt(lambda_max * lambda_max + 4.0 * sv_min * sv_min));
  out.pos_lower = lambda_min;
  out.pos_upper =
      0.5 * (lambda_max + std::sqrt(lambda_max * lambda_max + 4.0 * sv_max * sv_max));
  return out;
}

double kkt_condition_bound(double lambda_max, double lambda_min, double sv_max,
                           double sv_min) {
  if (!(lambda_min > 0.0) || lambda_max < lambda_min) {
    throw ContractViolation("kkt_condition_bound: need lambda_max >= lambda_min > 0");
  }
  if (sv_min < 0.0 || sv_max < sv_min) {
    throw ContractViolation("kkt_condition_bound: need sv_max >= sv_min >= 0");
  }
  if (sv_min == 0.0) return std::numeric_limits<double>::infinity();
  const double numerator =
      lambda_max + std::sqrt(lambda_max * lambda_max + 4.0 * sv_max * sv_max);
  const double gap =
      std::sqrt(lambda_max * lambda_max + 4.0 * sv_min * sv_min) - lambda_max;
  if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(numerator / gap, numerator / (2.0 * lambda_min));
}

double kkt_condition_bound(const SpectralData& s) {
  if (!s.sigma_min) {
    throw ContractViolation("kkt_condition_bound: sigma_min not computed");
  }
  return kkt_condition_bound(s.lambda_max, s.lambda_min, std::sqrt(s.sigma),
                             std::sqrt(*s.sigma_min));
}

double optimal_singular_value(double lambda_max, double lambda_min) {
  if (!(lambda_min > 0.0) || lambda_max < lambda_min) {
    throw ContractViolation(
        "optimal_singular_value: need lambda_max >= lambda_min > 0");
  }
  return std::sqrt(lambda_max * lambda_min + lambda_min * lambda_min);
}

double objective(const CanonicalProblem& prob, const Vector& z) {
  return 0.5 * z.dot(prob.p.apply(z)) + prob.q.dot(z);
}

double lagrangian(const CanonicalProblem& prob, const Vector& z,
                  const Vector& w) {
  if (w.size() != prob.m()) throw ContractViolation("lagrangian: w has wrong length");
  const Vector residual = matvec(prob.h, z) - prob.g;
  return objective(prob, z) + w.dot(residual);
}

ErrorMetrics error_metrics(const CanonicalProblem& prob, const Vector& z,
                           const Vector& z_star) {
  if (z.size() != prob.n() || z_star.size() != prob.n()) {
    throw ContractViolation("error_metrics: dimension mismatch");
  }
  const double scale = inf_norm(z_star);
  if (!(scale > 0.0)) {
    throw ContractViolation("error_metrics: reference solution is zero");
  }
  ErrorMetrics e;
  e.opt = inf_norm(z - z_star) / scale;
  e.feas = inf_norm(matvec(prob.h, z) - prob.g) / scale;
  return e;
}

double kkt_residual(const CanonicalProblem& prob, const Vector& z,
                    const Vector& w, double alpha_probe) {
  if (!(alpha_probe > 0.0)) throw ContractViolation("kkt_residual: alpha <= 0");
  if (z.size() != prob.n() || w.size() != prob.m()) {
    throw ContractViolation("kkt_residual: dimension mismatch");
  }
  Vector grad = prob.p.apply(z) + prob.q;
  if (prob.m() > 0) grad += matvec(prob.h, w, Transpose::kYes);
  const Vector stepped = prob.d.project(z - alpha_probe * grad);
  const double stationarity = inf_norm(z - stepped);
  const double feasibility =
      prob.m() > 0 ? inf_norm(matvec(prob.h, z) - prob.g) : 0.0;
  return std::max(stationarity, feasibility);
}

double default_probe_step(const SpectralData& s) {
  return 1.0 / (s.lambda_max + s.sigma);
}

}  // namespace pipg
