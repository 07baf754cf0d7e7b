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

#include "pipg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pipg/errors.hpp"
#include "pipg/problem_io.hpp"

namespace pipg {
namespace {

using json = nlohmann::json;

struct RunOutcome {
  bool valid = false;
  std::string warning;
  Vector x_init;
  std::vector<RunRecord> records;
};

CanonicalProblem make_problem(const ExperimentSpec& spec, std::uint64_t seed,
                              Vector& x_init) {
  switch (spec.problem) {
    case ProblemKind::kMassSpring: {
      MassSpringParams p = spec.mass_spring;
      p.x_init = sample_initial_state(seed, p.masses);
      x_init = p.x_init;
      return build_mass_spring(p);
    }
    case ProblemKind::kQuadrotor:
      return build_quadrotor(spec.quadrotor);
    case ProblemKind::kFile:
      return read_problem(spec.problem_file);
  }
  throw ContractViolation("unknown problem kind");
}

RunOutcome run_one(const ExperimentSpec& spec, std::int64_t run) {
  RunOutcome out;
  const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(run);
  const CanonicalProblem prob = make_problem(spec, seed, out.x_init);

  Vector z_star;
  try {
    z_star = splitting_reference_solve(prob, spec.oracle).z;
  } catch (const OracleFailure& e) {
    out.warning = "run " + std::to_string(run) + ": " + e.what();
    return out;
  }
  if (!(z_star.lpNorm<Eigen::Infinity>() > 0.0)) {
    out.warning = "run " + std::to_string(run) + ": reference solution is zero";
    return out;
  }
  out.valid = true;

  // sigma of the unpreconditioned problem is shared by plain and step runs.
  const SpectralData spectral = spectral_estimates(prob, seed);

  for (const Configuration c : spec.configurations) {
    SolverConfig cfg;
    cfg.k_max = spec.k_max;
    cfg.k_update = spec.k_update;
    cfg.tol_opt = spec.tol;
    cfg.use_precondition = uses_precondition(c);
    cfg.use_step_selection = uses_step_selection(c);
    cfg.history_stride = spec.history_stride;
    cfg.reference_solution = z_star;
    cfg.spectral = spectral;
    cfg.seed = seed;

    RunRecord rec;
    rec.config = c;
    rec.run = run;
    rec.seed = seed;
    double total_ms = 0.0;
    double min_ms = std::numeric_limits<double>::infinity();
    for (std::int64_t rep = 0; rep < spec.timing_repeats; ++rep) {
      SolverResult res = pipg_run(prob, cfg);
      total_ms += res.solve_time.count();
      min_ms = std::min(min_ms, res.solve_time.count());
      if (rep == 0) {
        rec.iterations = res.iterations;
        rec.converged = res.status == SolverStatus::kConverged;
        rec.precond_ms = res.precondition_time.count();
        if (spec.keep_history) rec.history = std::move(res.history);
        rec.steps.push_back(res.initial_steps);
        for (const auto& u : res.step_updates) {
          if (u.applied) rec.steps.push_back(u.steps);
        }
        rec.step_updates = std::move(res.step_updates);
        rec.spectral = res.spectral;
        rec.z_final = std::move(res.z_final);
      }
    }
    rec.solve_ms = total_ms / static_cast<double>(spec.timing_repeats);
    rec.solve_ms_min = min_ms;
    out.records.push_back(std::move(rec));
  }
  return out;
}

json encode_vector(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector decode_vector(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

double number_or_nan(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json encode_steps(const StepSizes& s) {
  return json::array({s.alpha, s.beta, s.gamma});
}

StepSizes decode_steps(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

std::string format_ms(double ms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << ms;
  return os.str();
}

}  // namespace

std::string to_string(Configuration c) {
  switch (c) {
    case Configuration::kPlain: return "plain";
    case Configuration::kQr: return "qr";
    case Configuration::kStep: return "step";
    case Configuration::kQrStep: return "qr+step";
  }
  return "?";
}

Configuration configuration_from_string(const std::string& name) {
  for (const Configuration c : all_configurations()) {
    if (to_string(c) == name) return c;
  }
  throw ContractViolation("unknown configuration '" + name +
                          "' (expected plain, qr, step or qr+step)");
}

const std::vector<Configuration>& all_configurations() {
  static const std::vector<Configuration> all = {
      Configuration::kPlain, Configuration::kQr, Configuration::kStep,
      Configuration::kQrStep};
  return all;
}

bool uses_precondition(Configuration c) {
  return c == Configuration::kQr || c == Configuration::kQrStep;
}

bool uses_step_selection(Configuration c) {
  return c == Configuration::kStep || c == Configuration::kQrStep;
}

void validate(const ExperimentSpec& spec) {
  if (spec.runs < 1) throw ContractViolation("experiment: runs must be >= 1");
  if (spec.configurations.empty()) {
    throw ContractViolation("experiment: no configurations selected");
  }
  if (spec.timing_repeats < 1) {
    throw ContractViolation("experiment: timing_repeats must be >= 1");
  }
  if (spec.k_max < 1) throw ContractViolation("experiment: k_max must be >= 1");
  if (!(spec.tol > 0.0)) throw ContractViolation("experiment: tol must be > 0");
  if (spec.jobs < 1) throw ContractViolation("experiment: jobs must be >= 1");
  if (spec.problem == ProblemKind::kFile && spec.problem_file.empty()) {
    throw ContractViolation("experiment: problem file not set");
  }
}

BenchmarkReport run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  BenchmarkReport report;
  switch (spec.problem) {
    case ProblemKind::kMassSpring: report.problem = "mass_spring"; break;
    case ProblemKind::kQuadrotor: report.problem = "quadrotor"; break;
    case ProblemKind::kFile: report.problem = spec.problem_file.string(); break;
  }

  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(spec.runs));
  const int workers = spec.timing_strict
                          ? 1
                          : static_cast<int>(std::min<std::int64_t>(spec.jobs, spec.runs));
  if (workers <= 1) {
    for (std::int64_t r = 0; r < spec.runs; ++r) {
      outcomes[static_cast<std::size_t>(r)] = run_one(spec, r);
    }
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::int64_t r = next++; r < spec.runs; r = next++) {
          try {
            outcomes[static_cast<std::size_t>(r)] = run_one(spec, r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::int64_t r = 0; r < spec.runs; ++r) {
    auto& o = outcomes[static_cast<std::size_t>(r)];
    if (!o.valid) {
      ++report.invalid_runs;
      report.warnings.push_back(std::move(o.warning));
      continue;
    }
    if (o.x_init.size() > 0) report.initial_conditions.emplace_back(r, o.x_init);
    for (auto& rec : o.records) report.records.push_back(std::move(rec));
  }
  return report;
}

std::vector<ConfigSummary> summarize(const BenchmarkReport& report) {
  std::vector<ConfigSummary> out;
  for (const Configuration c : all_configurations()) {
    ConfigSummary s;
    s.config = c;
    double iters = 0.0, solve = 0.0, precond = 0.0;
    s.min_iterations = std::numeric_limits<std::int64_t>::max();
    s.min_solve_ms = std::numeric_limits<double>::infinity();
    for (const auto& r : report.records) {
      if (r.config != c) continue;
      ++s.runs;
      if (r.converged) ++s.converged;
      iters += static_cast<double>(r.iterations);
      solve += r.solve_ms;
      precond += r.precond_ms;
      s.min_iterations = std::min(s.min_iterations, r.iterations);
      s.max_iterations = std::max(s.max_iterations, r.iterations);
      s.min_solve_ms = std::min(s.min_solve_ms, r.solve_ms_min);
    }
    if (s.runs == 0) continue;
    const auto count = static_cast<double>(s.runs);
    s.mean_iterations = iters / count;
    s.mean_solve_ms = solve / count;
    s.mean_precond_ms = precond / count;
    out.push_back(s);
  }
  return out;
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  throw ContractViolation("unsupported report format '" + name + "'");
}

std::string emit_report(const BenchmarkReport& report, ReportFormat format) {
  std::ostringstream os;
  switch (format) {
    case ReportFormat::kCsv: {
      os << std::setprecision(17);
      os << "config,run,iterations,solve_ms,precond_ms\n";
      for (const auto& r : report.records) {
        os << to_string(r.config) << ',' << r.run << ',' << r.iterations << ','
           << r.solve_ms << ',' << r.precond_ms << '\n';
      }
      break;
    }
    case ReportFormat::kJson: {
      json j;
      j["problem"] = report.problem;
      j["invalid_runs"] = report.invalid_runs;
      j["warnings"] = report.warnings;
      json ics = json::array();
      for (const auto& [run, x] : report.initial_conditions) {
        ics.push_back({{"run", run}, {"x_init", encode_vector(x)}});
      }
      j["initial_conditions"] = std::move(ics);
      json records = json::array();
      for (const auto& r : report.records) {
        json rec;
        rec["config"] = to_string(r.config);
        rec["run"] = r.run;
        rec["seed"] = r.seed;
        rec["iterations"] = r.iterations;
        rec["converged"] = r.converged;
        rec["solve_ms"] = r.solve_ms;
        rec["solve_ms_min"] = r.solve_ms_min;
        rec["precond_ms"] = r.precond_ms;
        json hist = json::array();
        for (const auto& h : r.history) {
          hist.push_back(json::array({h.k, number_or_null(h.error_opt),
                                      number_or_null(h.error_feas), h.gamma}));
        }
        rec["history"] = std::move(hist);
        json steps = json::array();
        for (const auto& s : r.steps) steps.push_back(encode_steps(s));
        rec["steps"] = std::move(steps);
        json updates = json::array();
        for (const auto& u : r.step_updates) {
          updates.push_back({{"k", u.k}, {"dz", u.dz}, {"dv", u.dv},
                             {"steps", encode_steps(u.steps)},
                             {"applied", u.applied}});
        }
        rec["step_updates"] = std::move(updates);
        rec["spectral"] = {{"lambda_max", r.spectral.lambda_max},
                           {"lambda_min", r.spectral.lambda_min},
                           {"sigma", r.spectral.sigma},
                           {"sigma_min", r.spectral.sigma_min
                                             ? json(*r.spectral.sigma_min)
                                             : json(nullptr)},
                           {"converged", r.spectral.converged}};
        rec["z_final"] = encode_vector(r.z_final);
        records.push_back(std::move(rec));
      }
      j["records"] = std::move(records);
      json summary = json::array();
      for (const auto& s : summarize(report)) {
        summary.push_back({{"config", to_string(s.config)},
                           {"runs", s.runs},
                           {"converged", s.converged},
                           {"mean_iterations", s.mean_iterations},
                           {"min_iterations", s.min_iterations},
                           {"max_iterations", s.max_iterations},
                           {"mean_solve_ms", s.mean_solve_ms},
                           {"min_solve_ms", s.min_solve_ms},
                           {"mean_precond_ms", s.mean_precond_ms}});
      }
      j["summary"] = std::move(summary);
      os << j.dump(2) << '\n';
      break;
    }
    case ReportFormat::kMarkdown: {
      const auto summary = summarize(report);
      auto cell = [&](Configuration c) -> std::string {
        for (const auto& s : summary) {
          if (s.config != c) continue;
          std::ostringstream cs;
          cs << std::fixed << std::setprecision(1) << s.mean_iterations
             << " it / " << format_ms(s.mean_solve_ms) << " ms";
          return cs.str();
        }
        return "-";
      };
      os << "Problem: " << report.problem << " (mean iterations / mean solve time)\n\n";
      os << "|                      | Without Precond. | With QR |\n";
      os << "|----------------------|------------------|---------|\n";
      os << "| Without Step Select. | " << cell(Configuration::kPlain) << " | "
         << cell(Configuration::kQr) << " |\n";
      os << "| With Step Select.    | " << cell(Configuration::kStep) << " | "
         << cell(Configuration::kQrStep) << " |\n";
      break;
    }
  }
  return os.str();
}

std::string emit_history_csv(const BenchmarkReport& report) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "config,run,k,error_opt,error_feas,gamma\n";
  for (const auto& r : report.records) {
    for (const auto& h : r.history) {
      os << to_string(r.config) << ',' << r.run << ',' << h.k << ','
         << h.error_opt << ',' << h.error_feas << ',' << h.gamma << '\n';
    }
  }
  return os.str();
}

BenchmarkReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    BenchmarkReport report;
    report.problem = j.at("problem").get<std::string>();
    report.invalid_runs = j.at("invalid_runs").get<std::int64_t>();
    report.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& ic : j.at("initial_conditions")) {
      report.initial_conditions.emplace_back(ic.at("run").get<std::int64_t>(),
                                             decode_vector(ic.at("x_init")));
    }
    for (const auto& rec : j.at("records")) {
      RunRecord r;
      r.config = configuration_from_string(rec.at("config").get<std::string>());
      r.run = rec.at("run").get<std::int64_t>();
      r.seed = rec.at("seed").get<std::uint64_t>();
      r.iterations = rec.at("iterations").get<std::int64_t>();
      r.converged = rec.at("converged").get<bool>();
      r.solve_ms = rec.at("solve_ms").get<double>();
      r.solve_ms_min = rec.at("solve_ms_min").get<double>();
      r.precond_ms = rec.at("precond_ms").get<double>();
      for (const auto& h : rec.at("history")) {
        r.history.push_back({h.at(0).get<std::int64_t>(), number_or_nan(h.at(1)),
                             number_or_nan(h.at(2)), h.at(3).get<double>()});
      }
      for (const auto& s : rec.at("steps")) r.steps.push_back(decode_steps(s));
      for (const auto& u : rec.at("step_updates")) {
        r.step_updates.push_back({u.at("k").get<std::int64_t>(),
                                  u.at("dz").get<double>(), u.at("dv").get<double>(),
                                  decode_steps(u.at("steps")),
                                  u.at("applied").get<bool>()});
      }
      const json& sp = rec.at("spectral");
      r.spectral.lambda_max = sp.at("lambda_max").get<double>();
      r.spectral.lambda_min = sp.at("lambda_min").get<double>();
      r.spectral.sigma = sp.at("sigma").get<double>();
      if (!sp.at("sigma_min").is_null()) {
        r.spectral.sigma_min = sp.at("sigma_min").get<double>();
      }
      r.spectral.converged = sp.at("converged").get<bool>();
      r.z_final = decode_vector(rec.at("z_final"));
      report.records.push_back(std::move(r));
    }
    return report;
  } catch (const json::exception& e) {
    throw ContractViolation(std::string("report JSON: ") + e.what());
  }
}

}  // namespace pipg
