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

// Micro benchmarks for the hot paths: one PIPG iteration with sparse H and
// with the dense preconditioned H, the set projections, the matvec kernels
// behind the storage choice, and the offline QR preconditioning.

#include <benchmark/benchmark.h>

#include <random>

#include "pipg/mpc_problems.hpp"
#include "pipg/precond.hpp"
#include "pipg/solver.hpp"

namespace {

using namespace pipg;

Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

CanonicalProblem mass_spring() {
  MassSpringParams p;
  p.x_init = sample_initial_state(0, p.masses);
  return build_mass_spring(p);
}

CanonicalProblem problem_by_index(std::int64_t i) {
  return i == 0 ? mass_spring() : build_quadrotor({});
}

void BM_Iteration(benchmark::State& state) {
  const CanonicalProblem prob = problem_by_index(state.range(0));
  const bool precondition = state.range(1) != 0;
  SpectralData s = spectral_estimates(prob);
  CanonicalProblem working = prob;
  if (precondition) {
    const PreconditionedProblem pp = qr_precondition(prob, s);
    s = pp.spectral(s);
    working = pp.problem();
  }
  const StepSizes steps = steps_from_gamma(s.sigma, s);
  const ProblemView view = ProblemView::of(working);
  SolverState st{prob.d.project(Vector::Zero(prob.n())), Vector::Zero(prob.m()),
                 Vector::Zero(prob.m()), 1};
  for (auto _ : state) {
    st = pipg_iterate(view, st, steps);
    benchmark::DoNotOptimize(st.z.data());
  }
  state.SetLabel(std::string(state.range(0) == 0 ? "mass_spring" : "quadrotor") +
                 (precondition ? " dense H_hat" : " sparse H"));
}
BENCHMARK(BM_Iteration)->ArgsProduct({{0, 1}, {0, 1}});

void BM_MatvecSparse(benchmark::State& state) {
  const CanonicalProblem prob = mass_spring();
  const Vector x = random_vector(prob.n(), 1);
  Vector out;
  for (auto _ : state) {
    matvec_into(prob.h, x, Transpose::kNo, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_MatvecSparse);

void BM_MatvecDense(benchmark::State& state) {
  const CanonicalProblem prob = mass_spring();
  const Matrix dense = to_dense(prob.h);
  const Vector x = random_vector(prob.n(), 1);
  Vector out;
  for (auto _ : state) {
    matvec_into(dense, x, Transpose::kNo, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_MatvecDense);

void BM_ProjectBallCapCone(benchmark::State& state) {
  const Vector z = random_vector(3, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_ball_cap_cone(z, 35.0, 0.176));
  }
}
BENCHMARK(BM_ProjectBallCapCone);

void BM_ProjectProduct(benchmark::State& state) {
  const CanonicalProblem prob = problem_by_index(state.range(0));
  const Vector z0 = 3.0 * random_vector(prob.n(), 3);
  Vector z = z0;
  for (auto _ : state) {
    z = z0;
    prob.d.project_in_place(z);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetLabel(state.range(0) == 0 ? "mass_spring" : "quadrotor");
}
BENCHMARK(BM_ProjectProduct)->Arg(0)->Arg(1);

void BM_QrPrecondition(benchmark::State& state) {
  const CanonicalProblem prob = problem_by_index(state.range(0));
  const SpectralData s = spectral_estimates(prob);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qr_precondition(prob, s).eta);
  }
  state.SetLabel(state.range(0) == 0 ? "mass_spring" : "quadrotor");
}
BENCHMARK(BM_QrPrecondition)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
