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

// Benchmark harness: solves a problem under the 2x2 matrix of
// {with, without} QR preconditioning x {with, without} adaptive step sizes,
// measuring iterations until error_opt < tol against a shared reference
// solution.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pipg/mpc_problems.hpp"
#include "pipg/oracle.hpp"
#include "pipg/solver.hpp"

namespace pipg {

enum class Configuration { kPlain, kQr, kStep, kQrStep };

std::string to_string(Configuration c);
// Accepts "plain", "qr", "step", "qr+step". Throws ContractViolation.
Configuration configuration_from_string(const std::string& name);
const std::vector<Configuration>& all_configurations();

bool uses_precondition(Configuration c);
bool uses_step_selection(Configuration c);

enum class ProblemKind { kMassSpring, kQuadrotor, kFile };

struct ExperimentSpec {
  ProblemKind problem = ProblemKind::kMassSpring;
  std::filesystem::path problem_file;  // for kFile
  MassSpringParams mass_spring;        // x_init is drawn per run
  QuadrotorParams quadrotor;
  std::vector<Configuration> configurations = all_configurations();
  // Mass-spring: one random initial state per run. Other problems are
  // deterministic; runs > 1 just repeats them.
  std::int64_t runs = 50;
  // Timed repetitions of each solve; the reported solve time is their mean.
  std::int64_t timing_repeats = 1;
  std::uint64_t seed = 0;
  std::int64_t k_max = 1000000;
  double tol = 1e-4;
  std::int64_t k_update = 25;
  std::int64_t history_stride = 1;
  bool keep_history = true;
  SplittingOptions oracle;
  // Number of worker threads over runs; ignored when timing_strict.
  int jobs = 1;
  bool timing_strict = false;
};

void validate(const ExperimentSpec& spec);

struct RunRecord {
  Configuration config = Configuration::kPlain;
  std::int64_t run = 0;
  std::uint64_t seed = 0;
  std::int64_t iterations = 0;
  bool converged = false;
  double solve_ms = 0.0;      // mean over timing repeats
  double solve_ms_min = 0.0;  // min over timing repeats
  double precond_ms = 0.0;
  std::vector<HistoryEntry> history;
  // Every step size the run used, for auditing the step-size condition.
  std::vector<StepSizes> steps;
  std::vector<StepUpdate> step_updates;
  SpectralData spectral;
  Vector z_final;
};

struct ConfigSummary {
  Configuration config = Configuration::kPlain;
  std::int64_t runs = 0;
  std::int64_t converged = 0;
  double mean_iterations = 0.0;
  std::int64_t min_iterations = 0;
  std::int64_t max_iterations = 0;
  double mean_solve_ms = 0.0;
  double min_solve_ms = 0.0;
  double mean_precond_ms = 0.0;
};

struct BenchmarkReport {
  std::string problem;
  std::vector<RunRecord> records;
  // Initial state of each valid run (mass-spring only), by run index.
  std::vector<std::pair<std::int64_t, Vector>> initial_conditions;
  std::int64_t invalid_runs = 0;
  std::vector<std::string> warnings;
};

// Throws ContractViolation on an invalid spec. Runs whose reference solve
// fails are counted in invalid_runs and skipped.
BenchmarkReport run_experiment(const ExperimentSpec& spec);

std::vector<ConfigSummary> summarize(const BenchmarkReport& report);

enum class ReportFormat { kCsv, kJson, kMarkdown };
ReportFormat report_format_from_string(const std::string& name);

// csv:      config,run,iterations,solve_ms,precond_ms
// json:     full report, readable by report_from_json
// markdown: rows = step selection off/on, columns = preconditioner off/on
std::string emit_report(const BenchmarkReport& report, ReportFormat format);

// config,run,k,error_opt,error_feas,gamma
std::string emit_history_csv(const BenchmarkReport& report);

BenchmarkReport report_from_json(const std::string& text);

}  // namespace pipg
