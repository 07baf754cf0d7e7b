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

#include "pipg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "pipg/errors.hpp"

namespace pipg {
namespace {

double inf_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

bool is_full_space(const ProductSet& d) {
  return std::all_of(d.blocks().begin(), d.blocks().end(), [](const auto& b) {
    return std::holds_alternative<FullSpace>(b.set);
  });
}

// [[P + rho I, H^T], [H, 0]] in CSC form.
SparseMatrixCSC regularized_kkt(const CanonicalProblem& prob, double rho) {
  const Index n = prob.n();
  const Index m = prob.m();
  std::vector<Eigen::Triplet<double>> t;
  if (prob.p.is_diagonal()) {
    for (Index i = 0; i < n; ++i) t.emplace_back(i, i, prob.p.diag()(i) + rho);
  } else {
    const DenseMatrix& p = prob.p.dense_matrix();
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        const double v = p(i, j) + (i == j ? rho : 0.0);
        if (v != 0.0) t.emplace_back(i, j, v);
      }
    }
  }
  const SparseMatrixCSC h = std::holds_alternative<SparseMatrixCSC>(prob.h)
                                ? std::get<SparseMatrixCSC>(prob.h)
                                : canonical_csc(std::get<DenseMatrix>(prob.h));
  for (Index j = 0; j < h.outerSize(); ++j) {
    for (SparseMatrixCSC::InnerIterator e(h, j); e; ++e) {
      t.emplace_back(n + e.row(), e.col(), e.value());
      t.emplace_back(e.col(), n + e.row(), e.value());
    }
  }
  SparseMatrixCSC kkt(n + m, n + m);
  kkt.setFromTriplets(t.begin(), t.end());
  kkt.makeCompressed();
  return kkt;
}

}  // namespace

KktSolution kkt_direct_solve(const CanonicalProblem& prob) {
  if (!is_full_space(prob.d)) {
    throw ContractViolation("kkt_direct_solve: D must be the full space");
  }
  const Index n = prob.n();
  const Index m = prob.m();
  if (n + m > 2000) {
    throw ContractViolation("kkt_direct_solve: limited to n + m <= 2000");
  }
  DenseMatrix kkt = DenseMatrix::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = prob.p.to_dense();
  if (m > 0) {
    const DenseMatrix h = to_dense(prob.h);
    kkt.bottomLeftCorner(m, n) = h;
    kkt.topRightCorner(n, m) = h.transpose();
  }
  Vector rhs(n + m);
  rhs.head(n) = -prob.q;
  rhs.tail(m) = prob.g;

  Eigen::FullPivLU<DenseMatrix> lu(kkt);
  if (!lu.isInvertible()) {
    throw SingularSystem("kkt_direct_solve: KKT matrix is singular");
  }
  const Vector sol = lu.solve(rhs);
  return {sol.head(n), sol.tail(m)};
}

SplittingResult splitting_reference_solve(const CanonicalProblem& prob,
                                          const SplittingOptions& opts) {
  if (!(opts.tol > 0.0)) throw ContractViolation("splitting: tol must be > 0");
  const Index n = prob.n();
  const Index m = prob.m();

  double rho = opts.rho;
  if (!(rho > 0.0)) {
    rho = prob.p.is_diagonal() ? prob.p.diag().mean()
                               : prob.p.dense_matrix().diagonal().mean();
  }

  Eigen::SparseLU<SparseMatrixCSC> lu;
  auto factorize = [&] {
    lu.compute(regularized_kkt(prob, rho));
    if (lu.info() != Eigen::Success) {
      throw OracleFailure("splitting: KKT factorization failed: " +
                          lu.lastErrorMessage());
    }
  };
  factorize();

  Vector y = prob.d.project(Vector::Zero(n));
  Vector u = Vector::Zero(n);
  Vector z(n), y_prev(n);
  Vector rhs(n + m);
  rhs.tail(m) = prob.g;

  SplittingResult out;
  for (std::int64_t it = 1; it <= opts.max_iters; ++it) {
    rhs.head(n) = rho * (y - u) - prob.q;
    z = lu.solve(rhs).head(n);

    y_prev = y;
    y = prob.d.project(z + u);
    u += z - y;

    const double r_prim = inf_norm(z - y);
    const double r_dual = rho * inf_norm(y - y_prev);
    const double eps_prim = opts.tol * (1.0 + std::max(inf_norm(z), inf_norm(y)));
    const double eps_dual = opts.tol * (1.0 + rho * inf_norm(u));
    out.iterations = it;
    out.primal_residual = r_prim;
    out.dual_residual = r_dual;
    if (!z.allFinite()) throw OracleFailure("splitting: non-finite iterate");
    if (r_prim <= eps_prim && r_dual <= eps_dual) {
      out.z = y;
      return out;
    }

    if (opts.rho_update_interval > 0 && it % opts.rho_update_interval == 0) {
      const double ratio = (r_prim / eps_prim) / std::max(r_dual / eps_dual, 1e-300);
      if (ratio > 25.0 || ratio < 1.0 / 25.0) {
        const double new_rho =
            std::clamp(rho * std::sqrt(ratio), rho / 100.0, rho * 100.0);
        u *= rho / new_rho;
        rho = new_rho;
        factorize();
      }
    }
  }
  throw OracleFailure("splitting: no convergence after " +
                      std::to_string(opts.max_iters) +
                      " iterations (primal residual " +
                      std::to_string(out.primal_residual) + ", dual residual " +
                      std::to_string(out.dual_residual) + ")");
}

Vector dykstra_project(const Vector& z, const std::vector<SetDescriptor>& sets,
                       double tol, std::int64_t max_iters) {
  if (sets.empty()) throw ContractViolation("dykstra: empty set list");
  if (!(tol > 0.0)) throw ContractViolation("dykstra: tol must be > 0");
  for (const auto& s : sets) {
    if (set_dimension(s) != z.size()) {
      throw ContractViolation("dykstra: set dimension mismatch");
    }
  }
  if (sets.size() == 1) return project(sets.front(), z);

  Vector x = z;
  std::vector<Vector> corrections(sets.size(), Vector::Zero(z.size()));
  for (std::int64_t it = 0; it < max_iters; ++it) {
    const Vector x_start = x;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const Vector shifted = x + corrections[i];
      const Vector y = project(sets[i], shifted);
      corrections[i] = shifted - y;
      x = y;
    }
    if (inf_norm(x - x_start) <= tol) return x;
  }
  throw OracleFailure("dykstra: iteration cap reached");
}

}  // namespace pipg
