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

// Dense and sparse kernels used by the solver. Dense matrices are Eigen
// column-major; sparse matrices are compressed sparse column (CSC).

#include <cstdint>
#include <functional>
#include <utility>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace pipg {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrixCSC = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// Either storage kind. The solver dispatches matrix-vector products on it.
using Matrix = std::variant<DenseMatrix, SparseMatrixCSC>;

enum class Transpose : bool { kNo = false, kYes = true };

Index rows(const Matrix& m);
Index cols(const Matrix& m);

Vector matvec(const DenseMatrix& m, const Vector& x,
              Transpose transpose = Transpose::kNo);
Vector matvec(const SparseMatrixCSC& m, const Vector& x,
              Transpose transpose = Transpose::kNo);
Vector matvec(const Matrix& m, const Vector& x,
              Transpose transpose = Transpose::kNo);

// Writes m*x (or m^T*x) into out without allocating. out must already have
// the right size.
void matvec_into(const Matrix& m, const Vector& x, Transpose transpose,
                 Vector& out);

DenseMatrix to_dense(const Matrix& m);

// Drops explicit zeros and compresses, so the CSC invariants hold.
SparseMatrixCSC canonical_csc(const DenseMatrix& m);
void canonicalize(SparseMatrixCSC& m);

// Checks column pointers, sorted row indices, and absence of stored zeros.
bool is_canonical_csc(const SparseMatrixCSC& m);

bool all_finite(const Vector& v);
bool all_finite(const DenseMatrix& m);

struct QRFactors {
  DenseMatrix q;  // rows(A) x cols(A), orthonormal columns
  DenseMatrix r;  // cols(A) x cols(A), upper triangular, positive diagonal
};

// Economy Householder QR with the sign of each column of Q chosen so that
// diag(R) > 0. Throws RankDeficiency when some |R(i,i)| falls below
// 1e-10 * max|A| * max(rows, cols).
QRFactors qr_economy(const DenseMatrix& a);

double qr_rank_tolerance(const DenseMatrix& a);

// Forward substitution. Throws SingularSystem on a (near-)zero pivot.
Vector solve_lower_triangular(const DenseMatrix& l, const Vector& b);

// Symmetric operator x -> y. Must not retain references past the call.
using SymmetricOperator = std::function<Vector(const Vector&)>;

struct PowerIterationOptions {
  double tol = 1e-8;
  std::int64_t max_iters = 5000;
  std::uint64_t seed = 0;
};

struct PowerIterationResult {
  double eigenvalue = 0.0;
  std::int64_t iterations = 0;
  // False when max_iters was hit; eigenvalue is then the best estimate.
  bool converged = false;
};

// Largest eigenvalue of a symmetric positive semidefinite operator. The
// start vector is a seeded pseudo-random unit vector, so the result is
// deterministic for a fixed seed.
PowerIterationResult power_iteration_max_eig(const SymmetricOperator& apply,
                                             Index dim,
                                             const PowerIterationOptions& opts = {});

// exp(A t) by scaling and squaring with a degree-13 Pade approximant.
DenseMatrix matrix_exponential(const DenseMatrix& a, double t);

}  // namespace pipg
