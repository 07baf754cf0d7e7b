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
#include "pipg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "pipg/errors.hpp"

namespace pipg {
namespace {

void check_matvec_dims(Index m_rows, Index m_cols, Index x_size,
                       Transpose transpose) {
  const Index expected = transpose == Transpose::kYes ? m_rows : m_cols;
  if (expected != x_size) {
    throw ContractViolation("matvec: operand has length " +
                            std::to_string(x_size) + ", expected " +
                            std::to_string(expected));
  }
}

}  // namespace

Index rows(const Matrix& m) {
  return std::visit([](const auto& mat) { return mat.rows(); }, m);
}

Index cols(const Matrix& m) {
  return std::visit([](const auto& mat) { return mat.cols(); }, m);
}

Vector matvec(const DenseMatrix& m, const Vector& x, Transpose transpose) {
  check_matvec_dims(m.rows(), m.cols(), x.size(), transpose);
  if (transpose == Transpose::kYes) return m.transpose() * x;
  return m * x;
}

Vector matvec(const SparseMatrixCSC& m, const Vector& x, Transpose transpose) {
  check_matvec_dims(m.rows(), m.cols(), x.size(), transpose);
  if (transpose == Transpose::kYes) return m.transpose() * x;
  return m * x;
}

Vector matvec(const Matrix& m, const Vector& x, Transpose transpose) {
  return std::visit(
      [&](const auto& mat) { return matvec(mat, x, transpose); }, m);
}

void matvec_into(const Matrix& m, const Vector& x, Transpose transpose,
                 Vector& out) {
  std::visit(
      [&](const auto& mat) {
        check_matvec_dims(mat.rows(), mat.cols(), x.size(), transpose);
        if (transpose == Transpose::kYes) {
          out.noalias() = mat.transpose() * x;
        } else {
          out.noalias() = mat * x;
        }
      },
      m);
}

DenseMatrix to_dense(const Matrix& m) {
  if (const auto* d = std::get_if<DenseMatrix>(&m)) return *d;
  return DenseMatrix(std::get<SparseMatrixCSC>(m));
}

SparseMatrixCSC canonical_csc(const DenseMatrix& m) {
  SparseMatrixCSC s = m.sparseView(0.0, 0.0);
  canonicalize(s);
  return s;
}

void canonicalize(SparseMatrixCSC& m) {
  m.prune(0.0, 0.0);
  m.makeCompressed();
}

bool is_canonical_csc(const SparseMatrixCSC& m) {
  if (!m.isCompressed()) return false;
  const auto* colptr = m.outerIndexPtr();
  const auto* rowval = m.innerIndexPtr();
  const auto* nzval = m.valuePtr();
  if (colptr[0] != 0) return false;
  for (Index j = 0; j < m.cols(); ++j) {
    if (colptr[j + 1] < colptr[j]) return false;
    for (auto p = colptr[j]; p < colptr[j + 1]; ++p) {
      if (rowval[p] < 0 || rowval[p] >= m.rows()) return false;
      if (p > colptr[j] && rowval[p] <= rowval[p - 1]) return false;
      if (nzval[p] == 0.0 || !std::isfinite(nzval[p])) return false;
    }
  }
  return true;
}

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const DenseMatrix& m) { return m.allFinite(); }

double qr_rank_tolerance(const DenseMatrix& a) {
  const double max_abs = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  return 1e-10 * max_abs * static_cast<double>(std::max(a.rows(), a.cols()));
}

QRFactors qr_economy(const DenseMatrix& a) {
  if (a.rows() < a.cols()) {
    throw ContractViolation("qr_economy: need rows >= cols, got " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw ContractViolation("qr_economy: non-finite entry");

  const Index n = a.cols();
  Eigen::HouseholderQR<DenseMatrix> qr(a);
  QRFactors out;
  out.r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  out.q = qr.householderQ() * DenseMatrix::Identity(a.rows(), n);

  const double tol = qr_rank_tolerance(a);
  for (Index i = 0; i < n; ++i) {
    const double d = out.r(i, i);
    if (!(std::abs(d) > tol)) {
      throw RankDeficiency("qr_economy: |R(" + std::to_string(i) + "," +
                           std::to_string(i) + ")| = " +
                           std::to_string(std::abs(d)) +
                           " below rank tolerance " + std::to_string(tol));
    }
    if (d < 0.0) {
      out.r.row(i) *= -1.0;
      out.q.col(i) *= -1.0;
    }
  }
  return out;
}

Vector solve_lower_triangular(const DenseMatrix& l, const Vector& b) {
  if (l.rows() != l.cols() || l.rows() != b.size()) {
    throw ContractViolation("solve_lower_triangular: dimension mismatch");
  }
  const Index n = l.rows();
  const double scale = n == 0 ? 0.0 : l.cwiseAbs().maxCoeff();
  const double pivot_tol = 1e-14 * scale;
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    const double pivot = l(i, i);
    if (!(std::abs(pivot) > pivot_tol)) {
      throw SingularSystem("solve_lower_triangular: pivot " +
                           std::to_string(i) + " is (near) zero");
    }
    const double dot = i == 0 ? 0.0 : l.row(i).head(i).dot(x.head(i));
    x(i) = (b(i) - dot) / pivot;
  }
  return x;
}

PowerIterationResult power_iteration_max_eig(const SymmetricOperator& apply,
                                             Index dim,
                                             const PowerIterationOptions& opts) {
  if (dim <= 0) throw ContractViolation("power_iteration: dim must be positive");
  if (!(opts.tol > 0.0)) throw ContractViolation("power_iteration: tol <= 0");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(dim);
  for (Index i = 0; i < dim; ++i) x(i) = normal(rng);
  x.normalize();

  PowerIterationResult result;
  double previous = 0.0;
  for (std::int64_t it = 1; it <= opts.max_iters; ++it) {
    Vector y = apply(x);
    const double rayleigh = x.dot(y);
    const double norm = y.stableNorm();
    result.eigenvalue = rayleigh;
    result.iterations = it;
    if (norm == 0.0) {
      // x lies in the null space; the operator is zero on this start vector.
      result.converged = true;
      return result;
    }
    if (it > 1 && std::abs(rayleigh - previous) <=
                      opts.tol * std::max(std::abs(rayleigh), 1e-300)) {
      result.converged = true;
      return result;
    }
    previous = rayleigh;
    x = y / norm;
  }
  return result;
}

DenseMatrix matrix_exponential(const DenseMatrix& a, double t) {
  if (a.rows() != a.cols()) {
    throw ContractViolation("matrix_exponential: matrix must be square");
  }
  if (!a.allFinite() || !std::isfinite(t)) {
    throw ContractViolation("matrix_exponential: non-finite input");
  }
  const DenseMatrix scaled = a * t;
  if (scaled.isZero(0.0)) return DenseMatrix::Identity(a.rows(), a.cols());
  return scaled.exp();
}

}  // namespace pipg
