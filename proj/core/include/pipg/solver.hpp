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

// Proportional-integral projected gradient (PIPG) with optional QR
// preconditioning and adaptive step-size selection.
//
// One iteration, with primal/dual steps (alpha, beta):
//
//   w+ = v + beta (H z - g)
//   z+ = Pi_D[z - alpha (P z + q + H^T w+)]
//   v+ = w+ + beta H (z+ - z)
//
// Step sizes are generated from a scalar gamma > 0 as
// alpha = 1 / (lambda_max + gamma), beta = gamma / sigma, which sits exactly
// on the boundary alpha (lambda_max + sigma beta) = 1 of the convergence
// region.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pipg/problem.hpp"

namespace pipg {

struct StepSizes {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// Throws ContractViolation when gamma <= 0. For sigma == 0 (no equality
// rows) beta is set to 0.
StepSizes steps_from_gamma(double gamma, const SpectralData& s);

// alpha (lambda_max + sigma beta) <= 1 + slack
bool satisfies_step_condition(const StepSizes& steps, const SpectralData& s,
                              double slack = 1e-12);

// Primal-dual gap surrogate obtained by substituting the current iterates
// for the optimum:
//   f(gamma) = (lambda_max + gamma)/2 * dz^2 + sigma/(2 gamma) * dv^2
// with dz = ||z1 - zk||, dv = ||v1 - wk||.
double step_surrogate(double gamma, const SpectralData& s, double dz, double dv);

enum class StepRule {
  // gamma = sqrt(sigma) ||v1 - wk|| / ||z1 - zk||, the minimizer of
  // step_surrogate.
  kSurrogateMinimizer,
  // gamma = sqrt(sigma) ||z1 - zk|| / ||v1 - wk||. Kept for comparison only.
  kInvertedRatio,
};

// Returns previous unchanged when ||z1 - zk|| or ||v1 - wk|| is <= 1e-12.
StepSizes step_selection(const Vector& z1, const Vector& v1, const Vector& zk,
                         const Vector& wk, const SpectralData& s,
                         const StepSizes& previous,
                         StepRule rule = StepRule::kSurrogateMinimizer);

struct SolverState {
  Vector z;
  Vector v;
  Vector w;
  std::int64_t k = 1;
};

// The data one iteration reads. H and g may be the preconditioned pair.
struct ProblemView {
  const CostHessian& p;
  const Vector& q;
  const Matrix& h;
  const Vector& g;
  const ProductSet& d;

  static ProblemView of(const CanonicalProblem& prob) {
    return {prob.p, prob.q, prob.h, prob.g, prob.d};
  }
};

// One PIPG iteration. Throws Divergence on a non-finite iterate.
SolverState pipg_iterate(const ProblemView& prob, const SolverState& state,
                         const StepSizes& steps);

struct SolverConfig {
  std::int64_t k_max = 100000;
  std::int64_t k_update = 25;
  double tol_opt = 1e-4;
  // Reference-free stopping threshold on
  // ||z+ - z||_inf / (1 + ||z||_inf). Defaults to tol_opt * 1e-2.
  std::optional<double> tol_fixed_point;
  // Defaults to sigma, i.e. beta = 1.
  std::optional<double> gamma_init;
  bool use_precondition = false;
  bool use_step_selection = false;
  StepRule step_rule = StepRule::kSurrogateMinimizer;
  std::int64_t history_stride = 1;
  // When set, stop once error_opt < tol_opt.
  std::optional<Vector> reference_solution;
  // Skips spectral estimation of the unpreconditioned problem.
  std::optional<SpectralData> spectral;
  std::uint64_t seed = 0;
};

void validate(const SolverConfig& config);

enum class SolverStatus { kConverged, kMaxIters };

std::string to_string(SolverStatus status);

struct HistoryEntry {
  std::int64_t k = 0;
  double error_opt = 0.0;   // NaN without a reference solution
  double error_feas = 0.0;  // against the original H, g
  double gamma = 0.0;
};

// One firing of the adaptive step-size rule.
struct StepUpdate {
  std::int64_t k = 0;
  double dz = 0.0;  // ||z1 - zk||
  double dv = 0.0;  // ||v1 - wk||
  StepSizes steps;
  bool applied = false;  // false when the degenerate guard kept the old steps
};

struct SolverResult {
  Vector z_final;
  Vector w_final;
  std::int64_t iterations = 0;
  SolverStatus status = SolverStatus::kMaxIters;
  std::vector<HistoryEntry> history;
  std::vector<StepUpdate> step_updates;
  StepSizes initial_steps;
  StepSizes final_steps;
  // Spectral data of the problem actually iterated on.
  SpectralData spectral;
  std::chrono::duration<double, std::milli> solve_time{0};
  std::chrono::duration<double, std::milli> precondition_time{0};
};

// Runs PIPG on prob. z1 defaults to Pi_D[0] (and is projected onto D if
// given), v1 defaults to 0. Throws Divergence on a non-finite iterate.
SolverResult pipg_run(const CanonicalProblem& prob, const SolverConfig& config,
                      const std::optional<Vector>& z1 = std::nullopt,
                      const std::optional<Vector>& v1 = std::nullopt);

// {status, iterations, solve_time_ms, precondition_time_ms,
//  history: [[k, error_opt, error_feas, gamma], ...], z_final}
std::string result_to_json(const SolverResult& result, int indent = -1);

}  // namespace pipg
