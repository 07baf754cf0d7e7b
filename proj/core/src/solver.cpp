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

#include "pipg/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "pipg/errors.hpp"
#include "pipg/precond.hpp"

namespace pipg {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kDegenerateNorm = 1e-12;

double inf_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// Iteration workspace that keeps H z from the previous step, so each
// iteration costs one product with H and one with H^T.
class Iteration {
 public:
  Iteration(const ProblemView& prob, SolverState state)
      : prob_(prob), state_(std::move(state)) {
    const Index n = prob_.q.size();
    const Index m = prob_.g.size();
    hz_.resize(m);
    hz_next_.resize(m);
    grad_.resize(n);
    htw_.resize(n);
    z_next_.resize(n);
    if (m > 0) matvec_into(prob_.h, state_.z, Transpose::kNo, hz_);
  }

  void step(const StepSizes& steps) {
    const Index m = prob_.g.size();
    SolverState& s = state_;

    // w+ = v + beta (H z - g)
    if (m > 0) s.w = s.v + steps.beta * (hz_ - prob_.g);

    // z+ = Pi_D[z - alpha (P z + q + H^T w+)]
    prob_.p.apply_into(s.z, grad_);
    grad_ += prob_.q;
    if (m > 0) {
      matvec_into(prob_.h, s.w, Transpose::kYes, htw_);
      grad_ += htw_;
    }
    z_next_ = s.z - steps.alpha * grad_;
    prob_.d.project_in_place(z_next_);
    if (!z_next_.allFinite()) {
      throw Divergence("PIPG produced a non-finite primal iterate", s.k);
    }

    // v+ = w+ + beta H (z+ - z)
    if (m > 0) {
      matvec_into(prob_.h, z_next_, Transpose::kNo, hz_next_);
      s.v = s.w + steps.beta * (hz_next_ - hz_);
      if (!s.v.allFinite()) {
        throw Divergence("PIPG produced a non-finite dual iterate", s.k);
      }
      hz_.swap(hz_next_);
    }
    s.z.swap(z_next_);
    ++s.k;
  }

  const SolverState& state() const { return state_; }
  // The primal iterate before the last step.
  const Vector& previous_z() const { return z_next_; }

 private:
  const ProblemView& prob_;
  SolverState state_;
  Vector hz_, hz_next_, grad_, htw_, z_next_;
};

}  // namespace

StepSizes steps_from_gamma(double gamma, const SpectralData& s) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ContractViolation("steps_from_gamma: gamma must be positive and finite");
  }
  StepSizes out;
  out.gamma = gamma;
  out.alpha = 1.0 / (s.lambda_max + gamma);
  out.beta = s.sigma > 0.0 ? gamma / s.sigma : 0.0;
  return out;
}

bool satisfies_step_condition(const StepSizes& steps, const SpectralData& s,
                              double slack) {
  return steps.alpha > 0.0 &&
         steps.alpha * (s.lambda_max + s.sigma * steps.beta) <= 1.0 + slack;
}

double step_surrogate(double gamma, const SpectralData& s, double dz,
                      double dv) {
  return 0.5 * (s.lambda_max + gamma) * dz * dz +
         s.sigma / (2.0 * gamma) * dv * dv;
}

StepSizes step_selection(const Vector& z1, const Vector& v1, const Vector& zk,
                         const Vector& wk, const SpectralData& s,
                         const StepSizes& previous, StepRule rule) {
  const double dz = (z1 - zk).norm();
  const double dv = (v1 - wk).norm();
  if (dz <= kDegenerateNorm || dv <= kDegenerateNorm || !(s.sigma > 0.0)) {
    return previous;
  }
  const double ratio = rule == StepRule::kSurrogateMinimizer ? dv / dz : dz / dv;
  return steps_from_gamma(std::sqrt(s.sigma) * ratio, s);
}

SolverState pipg_iterate(const ProblemView& prob, const SolverState& state,
                         const StepSizes& steps) {
  if (state.z.size() != prob.q.size() || state.v.size() != prob.g.size()) {
    throw ContractViolation("pipg_iterate: state dimensions do not match problem");
  }
  Iteration it(prob, state);
  it.step(steps);
  return it.state();
}

void validate(const SolverConfig& config) {
  if (config.k_max < 1) throw ContractViolation("k_max must be >= 1");
  if (config.k_update < 1) throw ContractViolation("k_update must be >= 1");
  if (!(config.tol_opt > 0.0)) throw ContractViolation("tol_opt must be > 0");
  if (config.history_stride < 1) {
    throw ContractViolation("history_stride must be >= 1");
  }
  if (config.tol_fixed_point && !(*config.tol_fixed_point > 0.0)) {
    throw ContractViolation("tol_fixed_point must be > 0");
  }
  if (config.gamma_init && !(*config.gamma_init > 0.0)) {
    throw ContractViolation("gamma_init must be > 0");
  }
}

std::string to_string(SolverStatus status) {
  return status == SolverStatus::kConverged ? "converged" : "max_iters";
}

SolverResult pipg_run(const CanonicalProblem& prob, const SolverConfig& config,
                      const std::optional<Vector>& z1,
                      const std::optional<Vector>& v1) {
  validate(config);
  const Index n = prob.n();
  const Index m = prob.m();
  if (config.reference_solution && config.reference_solution->size() != n) {
    throw ContractViolation("reference solution has wrong length");
  }

  SolverResult result;

  SpectralData spectral;
  if (config.spectral) {
    spectral = *config.spectral;
  } else {
    // With preconditioning sigma becomes eta^2, so the power iteration on
    // H^T H is skipped.
    spectral = spectral_estimates(prob, config.seed, !config.use_precondition);
  }
  if (!std::isfinite(spectral.lambda_max) || !std::isfinite(spectral.sigma)) {
    throw ContractViolation("spectral estimate overflowed; rescale the problem data");
  }

  // The problem actually iterated on.
  std::optional<PreconditionedProblem> pre;
  CanonicalProblem preconditioned;
  const CanonicalProblem* working = &prob;
  if (config.use_precondition) {
    const auto start = Clock::now();
    pre = qr_precondition(prob, spectral);
    result.precondition_time = Clock::now() - start;
    spectral = pre->spectral(spectral);
    preconditioned = pre->problem();
    working = &preconditioned;
  }
  result.spectral = spectral;

  SolverState state;
  state.z = prob.d.project(z1.value_or(Vector::Zero(n)));
  state.v = v1.value_or(Vector::Zero(m));
  if (state.v.size() != m) throw ContractViolation("v1 has wrong length");
  state.w = state.v;
  state.k = 1;
  const Vector z_init = state.z;
  const Vector v_init = state.v;

  const double gamma0 =
      config.gamma_init.value_or(spectral.sigma > 0.0 ? spectral.sigma : 1.0);
  StepSizes steps = steps_from_gamma(gamma0, spectral);
  result.initial_steps = steps;

  const bool has_reference = config.reference_solution.has_value();
  const double ref_scale =
      has_reference ? inf_norm(*config.reference_solution) : 1.0;
  if (has_reference && !(ref_scale > 0.0)) {
    throw ContractViolation("reference solution is zero; error_opt undefined");
  }
  const double tol_fp = config.tol_fixed_point.value_or(config.tol_opt * 1e-2);

  const ProblemView view = ProblemView::of(*working);
  Iteration it(view, std::move(state));
  Vector h_orig_z(m);

  const auto start = Clock::now();
  for (std::int64_t k = 1; k < config.k_max; ++k) {
    if (config.use_step_selection && k % config.k_update == 0) {
      const SolverState& cur = it.state();
      StepUpdate update;
      update.k = k;
      update.dz = (z_init - cur.z).norm();
      update.dv = (v_init - cur.w).norm();
      const StepSizes selected = step_selection(z_init, v_init, cur.z, cur.w,
                                                spectral, steps, config.step_rule);
      update.applied = selected.gamma != steps.gamma ||
                       selected.alpha != steps.alpha || selected.beta != steps.beta;
      update.steps = selected;
      steps = selected;
      result.step_updates.push_back(update);
    }

    it.step(steps);
    ++result.iterations;
    const Vector& z = it.state().z;

    bool done = false;
    double err_opt = std::numeric_limits<double>::quiet_NaN();
    if (has_reference) {
      err_opt = inf_norm(z - *config.reference_solution) / ref_scale;
      done = err_opt < config.tol_opt;
    } else {
      const Vector& z_prev = it.previous_z();
      done = inf_norm(z - z_prev) / (1.0 + inf_norm(z_prev)) < tol_fp;
    }

    if (result.iterations % config.history_stride == 0 || done) {
      double feas = 0.0;
      if (m > 0) {
        matvec_into(prob.h, z, Transpose::kNo, h_orig_z);
        feas = inf_norm(h_orig_z - prob.g) / ref_scale;
      }
      result.history.push_back({result.iterations, err_opt, feas, steps.gamma});
    }
    if (done) {
      result.status = SolverStatus::kConverged;
      break;
    }
  }
  result.solve_time = Clock::now() - start;

  result.z_final = it.state().z;
  result.w_final = it.state().w;
  result.final_steps = steps;
  return result;
}

std::string result_to_json(const SolverResult& result, int indent) {
  using json = nlohmann::json;
  auto number_or_null = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  json history = json::array();
  for (const auto& h : result.history) {
    history.push_back(json::array(
        {h.k, number_or_null(h.error_opt), number_or_null(h.error_feas), h.gamma}));
  }
  json j;
  j["status"] = to_string(result.status);
  j["iterations"] = result.iterations;
  j["solve_time_ms"] = result.solve_time.count();
  j["precondition_time_ms"] = result.precondition_time.count();
  j["history"] = std::move(history);
  j["z_final"] = std::vector<double>(result.z_final.data(),
                                     result.z_final.data() + result.z_final.size());
  return j.dump(indent);
}

}  // namespace pipg
