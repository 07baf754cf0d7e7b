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

// pipg: generate benchmark problems, solve them, run the configuration
// matrix, inspect the QR preconditioner, and project points onto sets.
//
// Exit codes: 0 success, 1 other error, 2 usage error, 3 solver divergence,
// 4 reference-solver failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pipg/errors.hpp"
#include "pipg/experiment.hpp"
#include "pipg/mpc_problems.hpp"
#include "pipg/oracle.hpp"
#include "pipg/precond.hpp"
#include "pipg/problem_io.hpp"
#include "pipg/solver.hpp"

namespace {

using namespace pipg;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitOracle = 4;

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  std::string problem = "mass_spring";
  std::string output;
  std::uint64_t seed = 0;
  bool zero_init = false;
  MassSpringParams ms;
  QuadrotorParams quad;
  std::vector<double> x_init;
  std::vector<double> x_target;
};

void add_generate(CLI::App& app, GenerateOptions& o) {
  auto* cmd = app.add_subcommand("generate", "Write a benchmark problem as JSON");
  cmd->add_option("--problem", o.problem, "mass_spring or quadrotor")
      ->check(CLI::IsMember({"mass_spring", "quadrotor"}));
  cmd->add_option("--output,-o", o.output, "Output file (default stdout)");
  cmd->add_option("--seed", o.seed, "Seed for the random mass-spring initial state")
      ->envname("PIPG_SEED");
  cmd->add_flag("--zero-init", o.zero_init, "Mass-spring: start at rest instead of sampling");
  cmd->add_option("--x-init", o.x_init, "Initial state (overrides sampling)");
  cmd->add_option("--x-target", o.x_target, "Quadrotor target state");

  // Shared names; the value goes to whichever problem is selected.
  cmd->add_option("--horizon", o.ms.horizon, "Horizon T")->default_val(30);
  cmd->add_option("--dt", o.ms.dt, "Sample time (mass-spring 0.1, quadrotor 0.2)");
  cmd->add_option("--v-max", o.ms.v_max, "Velocity bound");
  cmd->add_option("--u-max", o.ms.u_max, "Control bound");
  cmd->add_option("--position-weight", o.ms.position_weight, "State weight on positions");
  cmd->add_option("--velocity-weight", o.ms.velocity_weight, "State weight on velocities");
  cmd->add_option("--control-weight", o.ms.control_weight, "Control weight");

  cmd->add_option("--masses", o.ms.masses, "Mass-spring: number of masses");
  cmd->add_option("--r-max", o.ms.r_max, "Mass-spring: position bound");

  cmd->add_option("--mass", o.quad.mass, "Quadrotor: vehicle mass");
  cmd->add_option("--psi", o.quad.psi, "Quadrotor: half-space rotation rate");
  cmd->add_option("--phi", o.quad.phi, "Quadrotor: half-space initial phase");
  cmd->add_option("--obstacle-x", o.quad.obstacle_x, "Quadrotor: obstacle center x");
  cmd->add_option("--obstacle-y", o.quad.obstacle_y, "Quadrotor: obstacle center y");
  cmd->add_option("--obstacle-radius", o.quad.obstacle_radius, "Quadrotor: obstacle radius");
  cmd->add_option("--theta-max", o.quad.theta_max, "Quadrotor: thrust tilt limit [rad]");
  cmd->add_option("--gravity", o.quad.gravity, "Quadrotor: gravitational acceleration");
}

// Copies the shared options into the quadrotor parameters when they were
// given explicitly; otherwise the quadrotor keeps its own defaults.
QuadrotorParams quad_params(const CLI::App& cmd, const GenerateOptions& o) {
  QuadrotorParams q = o.quad;
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--horizon")) q.horizon = o.ms.horizon;
  if (given("--dt")) q.dt = o.ms.dt;
  if (given("--v-max")) q.v_max = o.ms.v_max;
  if (given("--u-max")) q.u_max = o.ms.u_max;
  if (given("--position-weight")) q.position_weight = o.ms.position_weight;
  if (given("--velocity-weight")) q.velocity_weight = o.ms.velocity_weight;
  if (given("--control-weight")) q.control_weight = o.ms.control_weight;
  if (!o.x_init.empty()) q.x_init = to_vector(o.x_init);
  if (!o.x_target.empty()) q.x_target = to_vector(o.x_target);
  return q;
}

int run_generate(const CLI::App& cmd, const GenerateOptions& o) {
  CanonicalProblem prob;
  if (o.problem == "mass_spring") {
    MassSpringParams p = o.ms;
    if (!o.x_init.empty()) {
      p.x_init = to_vector(o.x_init);
    } else if (!o.zero_init) {
      p.x_init = sample_initial_state(o.seed, p.masses);
    }
    prob = build_mass_spring(p);
  } else {
    prob = build_quadrotor(quad_params(cmd, o));
  }
  write_text(o.output, problem_to_json(prob));
  return kExitOk;
}

// ------------------------------------------------------------------- solve

struct SolveOptions {
  std::string input;
  std::string output;
  std::string config = "qr+step";
  std::string step_rule = "surrogate";
  std::int64_t k_max = 100000;
  std::int64_t k_update = 25;
  double tol = 1e-4;
  std::optional<double> tol_fixed_point;
  std::optional<double> gamma_init;
  std::int64_t history_stride = 1;
  bool reference = false;
  std::uint64_t seed = 0;
};

void add_solve(CLI::App& app, SolveOptions& o) {
  auto* cmd = app.add_subcommand("solve", "Solve a problem file with PIPG");
  cmd->add_option("--input,-i", o.input, "Problem JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output,-o", o.output, "Result JSON (default stdout)");
  cmd->add_option("--config", o.config, "plain, qr, step or qr+step")
      ->check(CLI::IsMember({"plain", "qr", "step", "qr+step"}));
  cmd->add_option("--step-rule", o.step_rule, "surrogate or inverted")
      ->check(CLI::IsMember({"surrogate", "inverted"}));
  cmd->add_option("--k-max", o.k_max, "Iteration cap");
  cmd->add_option("--k-update", o.k_update, "Iterations between step-size updates");
  cmd->add_option("--tol", o.tol, "Stop when error_opt drops below this (with --reference)");
  cmd->add_option("--tol-fixed-point", o.tol_fixed_point,
                  "Reference-free stopping threshold (default tol * 1e-2)");
  cmd->add_option("--gamma-init", o.gamma_init, "Initial gamma (default sigma)");
  cmd->add_option("--history-stride", o.history_stride, "Record every this many iterations");
  cmd->add_flag("--reference", o.reference,
                "Compute a reference solution first and stop on error_opt");
  cmd->add_option("--seed", o.seed, "Power-iteration seed")->envname("PIPG_SEED");
}

int run_solve(const SolveOptions& o) {
  const CanonicalProblem prob = read_problem(o.input);
  validate(prob);
  const Configuration c = configuration_from_string(o.config);
  SolverConfig cfg;
  cfg.k_max = o.k_max;
  cfg.k_update = o.k_update;
  cfg.tol_opt = o.tol;
  cfg.tol_fixed_point = o.tol_fixed_point;
  cfg.gamma_init = o.gamma_init;
  cfg.use_precondition = uses_precondition(c);
  cfg.use_step_selection = uses_step_selection(c);
  cfg.step_rule =
      o.step_rule == "inverted" ? StepRule::kInvertedRatio : StepRule::kSurrogateMinimizer;
  cfg.history_stride = o.history_stride;
  cfg.seed = o.seed;
  if (o.reference) cfg.reference_solution = splitting_reference_solve(prob).z;
  const SolverResult r = pipg_run(prob, cfg);
  write_text(o.output, result_to_json(r));
  std::fprintf(stderr, "%s after %lld iterations (%.3f ms solve, %.3f ms precondition)\n",
               to_string(r.status).c_str(), static_cast<long long>(r.iterations),
               r.solve_time.count(), r.precondition_time.count());
  return kExitOk;
}

// ------------------------------------------------------------------- bench

struct BenchOptions {
  std::string problem = "mass_spring";
  std::string input;
  std::vector<std::string> configs{"plain", "qr", "step", "qr+step"};
  std::optional<std::int64_t> runs;
  std::int64_t timing_repeats = 1;
  std::uint64_t seed = 0;
  std::int64_t k_max = 1000000;
  double tol = 1e-4;
  std::int64_t k_update = 25;
  std::int64_t history_stride = 1;
  int jobs = 1;
  bool timing_strict = false;
  std::string format = "markdown";
  std::string output;
  std::string history_output;
};

void add_bench(CLI::App& app, BenchOptions& o) {
  auto* cmd = app.add_subcommand("bench", "Run the configuration matrix on a benchmark");
  cmd->add_option("--problem", o.problem, "mass_spring, quadrotor or file")
      ->check(CLI::IsMember({"mass_spring", "quadrotor", "file"}));
  cmd->add_option("--input,-i", o.input, "Problem JSON for --problem file")->check(CLI::ExistingFile);
  cmd->add_option("--configs", o.configs, "Subset of plain qr step qr+step")
      ->check(CLI::IsMember({"plain", "qr", "step", "qr+step"}));
  cmd->add_option("--runs", o.runs, "Runs (default 50 for mass_spring, else 1)");
  cmd->add_option("--timing-repeats", o.timing_repeats, "Timed repetitions per solve");
  cmd->add_option("--seed", o.seed, "Base seed; run r uses seed + r")->envname("PIPG_SEED");
  cmd->add_option("--k-max", o.k_max, "Iteration cap");
  cmd->add_option("--tol", o.tol, "error_opt stopping threshold");
  cmd->add_option("--k-update", o.k_update, "Iterations between step-size updates");
  cmd->add_option("--history-stride", o.history_stride, "Record every this many iterations");
  cmd->add_option("--jobs", o.jobs, "Worker threads over runs");
  cmd->add_flag("--timing-strict", o.timing_strict, "Run sequentially for clean timings");
  cmd->add_option("--format", o.format, "csv, json or markdown");
  cmd->add_option("--output,-o", o.output, "Report file (default stdout)");
  cmd->add_option("--history-output", o.history_output, "Convergence-history CSV file");
}

int run_bench(const BenchOptions& o) {
  ExperimentSpec spec;
  if (o.problem == "mass_spring") {
    spec.problem = ProblemKind::kMassSpring;
  } else if (o.problem == "quadrotor") {
    spec.problem = ProblemKind::kQuadrotor;
  } else {
    if (o.input.empty()) throw ContractViolation("--problem file needs --input");
    spec.problem = ProblemKind::kFile;
    spec.problem_file = o.input;
  }
  spec.configurations.clear();
  for (const auto& name : o.configs) spec.configurations.push_back(configuration_from_string(name));
  spec.runs = o.runs.value_or(spec.problem == ProblemKind::kMassSpring ? 50 : 1);
  spec.timing_repeats = o.timing_repeats;
  spec.seed = o.seed;
  spec.k_max = o.k_max;
  spec.tol = o.tol;
  spec.k_update = o.k_update;
  spec.history_stride = o.history_stride;
  spec.keep_history = !o.history_output.empty() || o.format == "json";
  spec.jobs = o.jobs;
  spec.timing_strict = o.timing_strict;
  const ReportFormat format = report_format_from_string(o.format);

  const BenchmarkReport report = run_experiment(spec);
  write_text(o.output, emit_report(report, format));
  if (!o.history_output.empty()) write_text(o.history_output, emit_history_csv(report));
  for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (report.records.empty() && report.invalid_runs > 0) {
    throw OracleFailure("every run lost its reference solution");
  }
  return kExitOk;
}

// ------------------------------------------------------------ precondition

struct PreconditionOptions {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
};

void add_precondition(CLI::App& app, PreconditionOptions& o) {
  auto* cmd = app.add_subcommand("precondition",
                                 "QR-precondition a problem and report diagnostics");
  cmd->add_option("--input,-i", o.input, "Problem JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output,-o", o.output, "Write the preconditioned problem here");
  cmd->add_option("--seed", o.seed, "Power-iteration seed")->envname("PIPG_SEED");
}

int run_precondition(const PreconditionOptions& o) {
  const CanonicalProblem prob = read_problem(o.input);
  validate(prob);
  const SpectralData s = spectral_estimates(prob, o.seed);
  const PreconditionedProblem pp = qr_precondition(prob, s);
  const auto [smax, smin] = singular_value_extremes(prob.h);
  json j;
  j["eta"] = pp.eta;
  j["lambda_max"] = s.lambda_max;
  j["lambda_min"] = s.lambda_min;
  j["sigma"] = s.sigma;
  j["orthogonality_error"] = verify_orthogonality(pp);
  j["condition_bound_original"] = kkt_condition_bound(s.lambda_max, s.lambda_min, smax, smin);
  j["condition_bound_preconditioned"] =
      kkt_condition_bound(s.lambda_max, s.lambda_min, pp.eta, pp.eta);
  const Index m = prob.m(), n = prob.n();
  if (const auto* h = std::get_if<SparseMatrixCSC>(&prob.h)) {
    j["h_csc_bytes"] = csc_storage_bytes(*h);
  }
  j["h_dense_bytes"] = dense_storage_bytes(m, n);
  std::cout << j.dump(2) << '\n';
  if (!o.output.empty()) write_problem(o.output, pp.problem());
  return kExitOk;
}

// ----------------------------------------------------------------- project

struct ProjectOptions {
  std::string set = "box";
  std::vector<double> point;
  std::vector<double> lower, upper, center, normal;
  double radius = 1.0;
  double offset = 0.0;
  double ratio = 1.0;
};

void add_project(CLI::App& app, ProjectOptions& o) {
  auto* cmd = app.add_subcommand("project", "Project a point onto a single set");
  cmd->add_option("--set", o.set, "box, ball, halfspace, soc or ball_cap_cone")
      ->check(CLI::IsMember({"box", "ball", "halfspace", "soc", "ball_cap_cone"}));
  cmd->add_option("--point", o.point, "Point to project")->required();
  cmd->add_option("--lower", o.lower, "Box lower bounds");
  cmd->add_option("--upper", o.upper, "Box upper bounds");
  cmd->add_option("--center", o.center, "Ball center (default origin)");
  cmd->add_option("--normal", o.normal, "Half-space normal");
  cmd->add_option("--radius", o.radius, "Ball radius");
  cmd->add_option("--offset", o.offset, "Half-space offset");
  cmd->add_option("--ratio", o.ratio, "Cone ratio (||x|| <= ratio * t)");
}

int run_project(const ProjectOptions& o) {
  const Vector z = to_vector(o.point);
  const Index n = z.size();
  SetDescriptor set;
  if (o.set == "box") {
    set = Box{to_vector(o.lower), to_vector(o.upper)};
  } else if (o.set == "ball") {
    set = Ball{o.radius, o.center.empty() ? Vector(Vector::Zero(n)) : to_vector(o.center)};
  } else if (o.set == "halfspace") {
    set = HalfSpace{to_vector(o.normal), o.offset};
  } else if (o.set == "soc") {
    set = SecondOrderCone{o.ratio, n};
  } else {
    set = BallCapCone{o.radius, o.ratio, n};
  }
  validate(set);
  if (set_dimension(set) != n) throw ContractViolation("set and point dimensions differ");
  std::cout << json(to_std(project(set, z))).dump() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PIPG conic solver with QR preconditioning and adaptive step sizes"};
  app.require_subcommand(1);
  GenerateOptions gen;
  SolveOptions solve;
  BenchOptions bench;
  PreconditionOptions pre;
  ProjectOptions proj;
  add_generate(app, gen);
  add_solve(app, solve);
  add_bench(app, bench);
  add_precondition(app, pre);
  add_project(app, proj);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (auto* cmd = app.get_subcommand("generate"); cmd->parsed()) return run_generate(*cmd, gen);
    if (app.got_subcommand("solve")) return run_solve(solve);
    if (app.got_subcommand("bench")) return run_bench(bench);
    if (app.got_subcommand("precondition")) return run_precondition(pre);
    if (app.got_subcommand("project")) return run_project(proj);
  } catch (const Divergence& e) {
    std::fprintf(stderr, "error: %s (iteration %lld)\n", e.what(),
                 static_cast<long long>(e.iteration()));
    return kExitDivergence;
  } catch (const OracleFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOracle;
  } catch (const ContractViolation& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const RankDeficiency& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitUsage;
}
