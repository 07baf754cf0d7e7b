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

#include "pipg/mpc_problems.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "pipg/errors.hpp"

namespace pipg {
namespace {

Vector or_default(const Vector& v, std::initializer_list<double> fallback) {
  if (v.size() > 0) return v;
  Vector out(static_cast<Index>(fallback.size()));
  Index i = 0;
  for (double x : fallback) out(i++) = x;
  return out;
}

// Equality rows x_1 = x_init and x_{t+1} - A x_t - B u_t = c.
void stack_dynamics(const StackedLayout& layout, const LinearDynamics& dyn,
                    const Vector& x_init, CanonicalProblem& prob) {
  const Index nx = layout.n_x;
  const Index nu = layout.n_u;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(layout.m_eq() * (1 + nx + nu)));
  Vector g(layout.m_eq());

  for (Index i = 0; i < nx; ++i) t.emplace_back(i, layout.state_offset(0) + i, 1.0);
  g.head(nx) = x_init;

  for (Index step = 0; step + 1 < layout.horizon; ++step) {
    const Index row0 = nx * (step + 1);
    for (Index i = 0; i < nx; ++i) {
      t.emplace_back(row0 + i, layout.state_offset(step + 1) + i, 1.0);
      for (Index j = 0; j < nx; ++j) {
        if (dyn.a(i, j) != 0.0) {
          t.emplace_back(row0 + i, layout.state_offset(step) + j, -dyn.a(i, j));
        }
      }
      for (Index j = 0; j < nu; ++j) {
        if (dyn.b(i, j) != 0.0) {
          t.emplace_back(row0 + i, layout.control_offset(step) + j, -dyn.b(i, j));
        }
      }
    }
    g.segment(row0, nx) = dyn.c;
  }

  SparseMatrixCSC h(layout.m_eq(), layout.n());
  h.setFromTriplets(t.begin(), t.end());
  canonicalize(h);
  prob.h = std::move(h);
  prob.g = std::move(g);
}

}  // namespace

void validate(const MassSpringParams& p) {
  if (p.horizon < 2) throw ContractViolation("mass-spring: horizon must be >= 2");
  if (p.masses < 1) throw ContractViolation("mass-spring: need at least one mass");
  if (!(p.dt > 0.0)) throw ContractViolation("mass-spring: dt must be > 0");
  if (!(p.r_max > 0.0) || !(p.v_max > 0.0) || !(p.u_max > 0.0)) {
    throw ContractViolation("mass-spring: bounds must be > 0");
  }
  if (!(p.position_weight > 0.0) || !(p.velocity_weight > 0.0) ||
      !(p.control_weight > 0.0)) {
    throw ContractViolation("mass-spring: weights must be > 0");
  }
  if (p.x_init.size() != 0 && p.x_init.size() != 2 * p.masses) {
    throw ContractViolation("mass-spring: x_init must have length 2N");
  }
}

DenseMatrix chain_stiffness(Index masses) {
  DenseMatrix k = DenseMatrix::Zero(masses, masses);
  for (Index i = 0; i < masses; ++i) {
    k(i, i) = 2.0;
    if (i > 0) k(i, i - 1) = -1.0;
    if (i + 1 < masses) k(i, i + 1) = -1.0;
  }
  return k;
}

LinearDynamics mass_spring_dynamics(const MassSpringParams& p) {
  validate(p);
  const Index n = p.masses;
  // exp([[Ac, Bc], [0, 0]] dt) = [[A, B], [0, I]]
  DenseMatrix aug = DenseMatrix::Zero(3 * n, 3 * n);
  aug.block(0, n, n, n).setIdentity();
  aug.block(n, 0, n, n) = -chain_stiffness(n);
  aug.block(n, 2 * n, n, n).setIdentity();
  const DenseMatrix e = matrix_exponential(aug, p.dt);
  return {e.topLeftCorner(2 * n, 2 * n), e.topRightCorner(2 * n, n),
          Vector::Zero(2 * n)};
}

StackedLayout mass_spring_layout(const MassSpringParams& p) {
  return {p.horizon, 2 * p.masses, p.masses};
}

CanonicalProblem build_mass_spring(const MassSpringParams& p) {
  validate(p);
  const StackedLayout layout = mass_spring_layout(p);
  const Index n_masses = p.masses;
  const Vector x_init =
      p.x_init.size() > 0 ? p.x_init : Vector::Zero(2 * n_masses).eval();

  CanonicalProblem prob;
  Vector diag(layout.n());
  for (Index t = 0; t < layout.horizon; ++t) {
    const Index xo = layout.state_offset(t);
    diag.segment(xo, n_masses).setConstant(p.position_weight);
    diag.segment(xo + n_masses, n_masses).setConstant(p.velocity_weight);
    prob.d.append(Box{
        (Vector(2 * n_masses) << Vector::Constant(n_masses, -p.r_max),
         Vector::Constant(n_masses, -p.v_max)).finished(),
        (Vector(2 * n_masses) << Vector::Constant(n_masses, p.r_max),
         Vector::Constant(n_masses, p.v_max)).finished()});
    if (t + 1 < layout.horizon) {
      diag.segment(layout.control_offset(t), n_masses).setConstant(p.control_weight);
      prob.d.append(Box{Vector::Constant(n_masses, -p.u_max),
                        Vector::Constant(n_masses, p.u_max)});
    }
  }
  prob.p = CostHessian::diagonal(std::move(diag));
  prob.q = Vector::Zero(layout.n());
  stack_dynamics(layout, mass_spring_dynamics(p), x_init, prob);
  return prob;
}

Vector sample_initial_state(std::uint64_t seed, Index masses) {
  if (masses < 1) throw ContractViolation("sample_initial_state: masses < 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.5, 0.5);
  Vector x(2 * masses);
  for (Index i = 0; i < x.size(); ++i) x(i) = uniform(rng);
  return x;
}

void validate(const QuadrotorParams& p) {
  if (p.horizon < 2) throw ContractViolation("quadrotor: horizon must be >= 2");
  if (!(p.dt > 0.0)) throw ContractViolation("quadrotor: dt must be > 0");
  if (!(p.mass > 0.0)) throw ContractViolation("quadrotor: mass must be > 0");
  if (!(p.obstacle_radius > 0.0)) {
    throw ContractViolation("quadrotor: obstacle radius must be > 0");
  }
  if (!(p.theta_max > 0.0) || !(p.theta_max < std::numbers::pi / 2.0)) {
    throw ContractViolation("quadrotor: theta_max must lie in (0, pi/2)");
  }
  if (!(p.v_max > 0.0) || !(p.u_max > 0.0)) {
    throw ContractViolation("quadrotor: bounds must be > 0");
  }
  if (!(p.position_weight > 0.0) || !(p.velocity_weight > 0.0) ||
      !(p.control_weight > 0.0)) {
    throw ContractViolation("quadrotor: weights must be > 0");
  }
  if (p.x_init.size() != 0 && p.x_init.size() != 6) {
    throw ContractViolation("quadrotor: x_init must have length 6");
  }
  if (p.x_target.size() != 0 && p.x_target.size() != 6) {
    throw ContractViolation("quadrotor: x_target must have length 6");
  }
}

LinearDynamics quadrotor_dynamics(const QuadrotorParams& p) {
  validate(p);
  const double dt = p.dt;
  LinearDynamics dyn;
  dyn.a = DenseMatrix::Identity(6, 6);
  dyn.a.topRightCorner(3, 3) = dt * DenseMatrix::Identity(3, 3);
  dyn.b = DenseMatrix::Zero(6, 3);
  dyn.b.topRows(3) = (0.5 * dt * dt / p.mass) * DenseMatrix::Identity(3, 3);
  dyn.b.bottomRows(3) = (dt / p.mass) * DenseMatrix::Identity(3, 3);
  dyn.c = Vector::Zero(6);
  dyn.c(2) = -0.5 * p.gravity * dt * dt;
  dyn.c(5) = -p.gravity * dt;
  return dyn;
}

KeepOutHalfSpace keep_out_halfspace(const QuadrotorParams& p, Index t) {
  const double angle = p.psi * static_cast<double>(t) * p.dt + p.phi;
  Vector a(2);
  a << std::cos(angle), -std::sin(angle);
  const double b = a(0) * p.obstacle_x + a(1) * p.obstacle_y - p.obstacle_radius;
  return {a, b};
}

Vector quadrotor_reference(const QuadrotorParams& p, Index t) {
  const Vector x0 = or_default(p.x_init, {0, 0, 5, 0, 0, 0});
  const Vector x1 = or_default(p.x_target, {5, 5, 5, 0, 0, 0});
  const double s =
      static_cast<double>(t - 1) / static_cast<double>(p.horizon - 1);
  return x0 + s * (x1 - x0);
}

StackedLayout quadrotor_layout(const QuadrotorParams& p) {
  return {p.horizon, 6, 3};
}

CanonicalProblem build_quadrotor(const QuadrotorParams& p) {
  validate(p);
  const StackedLayout layout = quadrotor_layout(p);
  const Vector x_init = or_default(p.x_init, {0, 0, 5, 0, 0, 0});

  CanonicalProblem prob;
  Vector diag(layout.n());
  prob.q = Vector::Zero(layout.n());
  const double tilt_ratio = std::tan(p.theta_max);
  for (Index t = 0; t < layout.horizon; ++t) {
    const Index xo = layout.state_offset(t);
    Vector q_diag(6);
    q_diag << Vector::Constant(3, p.position_weight),
        Vector::Constant(3, p.velocity_weight);
    diag.segment(xo, 6) = q_diag;
    prob.q.segment(xo, 6) = -q_diag.cwiseProduct(quadrotor_reference(p, t + 1));

    const KeepOutHalfSpace keep_out = keep_out_halfspace(p, t + 1);
    prob.d.append(HalfSpace{keep_out.normal, keep_out.offset});
    prob.d.append(FullSpace{1});
    prob.d.append(Ball{p.v_max, Vector::Zero(3)});
    if (t + 1 < layout.horizon) {
      diag.segment(layout.control_offset(t), 3).setConstant(p.control_weight);
      // ||u|| <= u_max and cos(theta_max) ||u|| <= u_3, the latter written as
      // ||u_{1:2}|| <= tan(theta_max) u_3.
      prob.d.append(BallCapCone{p.u_max, tilt_ratio, 3});
    }
  }
  prob.p = CostHessian::diagonal(std::move(diag));
  stack_dynamics(layout, quadrotor_dynamics(p), x_init, prob);
  return prob;
}

}  // namespace pipg
