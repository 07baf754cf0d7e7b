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

// Generators for two MPC benchmark problems in stacked form: the states and
// controls of every time step are decision variables, the dynamics are
// equality constraints, and the state/control limits make up D.
//
// Variable ordering is (x_1, u_1, x_2, u_2, ..., u_{T-1}, x_T). The first n_x
// equality rows pin x_1 = x_init; each following block of n_x rows encodes
// x_{t+1} - A x_t - B u_t = c.

#include <cstdint>
#include <numbers>

#include "pipg/problem.hpp"

namespace pipg {

struct StackedLayout {
  Index horizon = 0;  // T
  Index n_x = 0;
  Index n_u = 0;

  Index n() const { return horizon * n_x + (horizon - 1) * n_u; }
  Index m_eq() const { return horizon * n_x; }
  // Zero-based time index t in [0, T) / [0, T-1).
  Index state_offset(Index t) const { return t * (n_x + n_u); }
  Index control_offset(Index t) const { return t * (n_x + n_u) + n_x; }
};

struct LinearDynamics {
  DenseMatrix a;
  DenseMatrix b;
  Vector c;
};

// Chain of unit masses joined by unit springs, with walls at both ends.
// State x = (positions r, velocities v), control u = force on each mass.
struct MassSpringParams {
  Index horizon = 30;
  double dt = 0.1;
  Index masses = 8;
  double r_max = 0.75;
  double v_max = 0.75;
  double u_max = 0.5;
  double position_weight = 1.0;  // Q_t = blkdiag(w_r I, w_v I)
  double velocity_weight = 5.0;
  double control_weight = 1.0;   // R_t = w_u I
  Vector x_init;                 // length 2 * masses; zero if empty
};

void validate(const MassSpringParams& p);

// Tridiagonal (2, -1) stiffness matrix.
DenseMatrix chain_stiffness(Index masses);

// Zero-order-hold discretization of x' = [[0, I], [-K, 0]] x + [[0], [I]] u.
LinearDynamics mass_spring_dynamics(const MassSpringParams& p);

StackedLayout mass_spring_layout(const MassSpringParams& p);
CanonicalProblem build_mass_spring(const MassSpringParams& p);

// 2N i.i.d. draws from U[-0.5, 0.5], deterministic for a seed.
Vector sample_initial_state(std::uint64_t seed, Index masses);

// Three-DoF point-mass quadrotor under gravity with a rotating half-space
// standing in for a cylindrical keep-out zone.
struct QuadrotorParams {
  Index horizon = 30;
  double dt = 0.2;
  double mass = 3.0;
  double psi = -0.5;                     // half-space rotation rate
  double phi = -std::numbers::pi / 4.0;  // initial phase
  double obstacle_x = 2.5;
  double obstacle_y = 2.5;
  double obstacle_radius = 0.25;
  double v_max = 1.5;
  double u_max = 35.0;
  double theta_max = 0.1745;  // thrust tilt limit [rad]
  double gravity = 9.8;
  double position_weight = 2.0;  // Q_t = blkdiag(w_r I, w_v I)
  double velocity_weight = 1.0;
  double control_weight = 0.5;   // R_t = w_u I
  Vector x_init;                 // (0, 0, 5, 0, 0, 0) if empty
  Vector x_target;               // (5, 5, 5, 0, 0, 0) if empty
};

void validate(const QuadrotorParams& p);

LinearDynamics quadrotor_dynamics(const QuadrotorParams& p);

struct KeepOutHalfSpace {
  Vector normal;  // a_t, acting on the horizontal position
  double offset;  // b_t
};

// The half-space a_t^T r <= b_t at one-based time step t, with
// a_t = (cos th, -sin th), th = psi t dt + phi (psi is a rate per unit
// time), and
// b_t = a_t^T r_c - rho, which keeps r at least rho behind the obstacle
// center along a_t.
KeepOutHalfSpace keep_out_halfspace(const QuadrotorParams& p, Index t);

// Reference state at one-based step t, linear from x_init (t = 1) to
// x_target (t = T).
Vector quadrotor_reference(const QuadrotorParams& p, Index t);

StackedLayout quadrotor_layout(const QuadrotorParams& p);
CanonicalProblem build_quadrotor(const QuadrotorParams& p);

}  // namespace pipg
