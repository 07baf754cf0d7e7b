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

#include <doctest.h>

#include <cmath>

#include "pipg/errors.hpp"
#include "pipg/oracle.hpp"
#include "pipg/projections.hpp"
#include "test_support.hpp"

using namespace pipg;
using pipg::testing::max_abs;
using pipg::testing::Rng;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Random set of dimension n, of the given kind index (0..4).
SetDescriptor random_set(Rng& rng, int kind, Index n) {
  switch (kind) {
    case 0: {
      const Vector lo = rng.uniform_vector(n, -2.0, 0.0);
      return Box{lo, lo + rng.uniform_vector(n, 0.0, 2.0)};
    }
    case 1:
      return Ball{rng.uniform(0.2, 2.0), rng.uniform_vector(n)};
    case 2:
      return HalfSpace{rng.normal_vector(n), rng.uniform()};
    case 3:
      return SecondOrderCone{rng.uniform(0.1, 3.0), n};
    default:
      return BallCapCone{rng.uniform(0.2, 3.0), rng.uniform(0.1, 3.0), n};
  }
}

// Random point of the set, built without calling any projection.
Vector random_member(Rng& rng, const SetDescriptor& set) {
  return std::visit(
      [&](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          Vector y(s.lower.size());
          for (Index i = 0; i < y.size(); ++i) y(i) = rng.uniform(s.lower(i), s.upper(i));
          return y;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return s.center + rng.point_in_ball(s.center.size(), s.radius);
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          Vector y = 3.0 * rng.normal_vector(s.normal.size());
          const double excess = s.normal.dot(y) - s.offset;
          if (excess > 0.0) {
            y -= (excess / s.normal.squaredNorm() + rng.uniform(0.0, 1.0)) * s.normal;
          }
          return y;
        } else if constexpr (std::is_same_v<T, SecondOrderCone>) {
          Vector y(s.dim);
          y.head(s.dim - 1) = 2.0 * rng.normal_vector(s.dim - 1);
          y(s.dim - 1) = y.head(s.dim - 1).norm() / s.ratio + rng.uniform(0.0, 2.0);
          return y;
        } else if constexpr (std::is_same_v<T, BallCapCone>) {
          Vector y(s.dim);
          y.head(s.dim - 1) = rng.normal_vector(s.dim - 1);
          y(s.dim - 1) = y.head(s.dim - 1).norm() / s.ratio + rng.uniform(0.0, 1.0);
          return y * (rng.uniform(0.0, 1.0) * s.radius / y.norm());
        } else {
          return rng.normal_vector(s.dim);
        }
      },
      set);
}

}  // namespace

TEST_CASE("box projection") {
  const Vector lo = Vector::Constant(2, -0.75), hi = Vector::Constant(2, 0.75);
  CHECK(project_box(vec({2, -2}), lo, hi) == vec({0.75, -0.75}));
  CHECK(project_box(vec({0.1, 0.2}), lo, hi) == vec({0.1, 0.2}));
  CHECK(project_box(vec({0.75}), vec({-0.75}), vec({0.75})) == vec({0.75}));
  CHECK_THROWS_AS(project_box(vec({1, 2, 3}), lo, hi), ContractViolation);
  // Infinite bounds leave that side open.
  CHECK(project_box(vec({5, -5}), vec({-INFINITY, 0}), vec({INFINITY, INFINITY})) ==
        vec({5, 0}));
}

TEST_CASE("ball projection") {
  CHECK(max_abs(project_ball(vec({3, 4}), 1.0, Vector::Zero(2)) - vec({0.6, 0.8})) <=
        1e-15);
  CHECK(project_ball(vec({0.1, 0}), 1.0, Vector::Zero(2)) == vec({0.1, 0}));
  CHECK(project_ball(vec({2, 0}), 1.0, vec({1, 0})) == vec({2, 0}));
  CHECK_THROWS_AS(project_ball(vec({1, 1}), 0.0, Vector::Zero(2)), ContractViolation);
  CHECK_THROWS_AS(project_ball(vec({1, 1}), 1.0, Vector::Zero(3)), ContractViolation);
}

TEST_CASE("half-space projection") {
  CHECK(project_halfspace(vec({2, 3}), vec({1, 0}), 0.0) == vec({0, 3}));
  CHECK(project_halfspace(vec({-1, 1}), vec({1, 0}), 0.0) == vec({-1, 1}));
  CHECK(max_abs(project_halfspace(vec({1, 1}), vec({1, 1}), 0.0)) <= 1e-15);
  CHECK_THROWS_AS(project_halfspace(vec({1, 1}), vec({0, 0}), 0.0), ContractViolation);
}

TEST_CASE("second-order cone projection") {
  CHECK(project_soc(vec({1, 0, 2}), 1.0) == vec({1, 0, 2}));
  CHECK(project_soc(vec({3, 0, -4}), 1.0) == vec({0, 0, 0}));
  const Vector p = project_soc(vec({1, 0, 0}), 1.0);
  CHECK(max_abs(p - vec({0.5, 0, 0.5})) <= 1e-15);

  // Independent check: brute-force search over the cone boundary ray family
  // (s cos a, s sin a, s) plus the apex gives the same nearest point.
  const Vector z = vec({1, 0, 0});
  double best = z.norm();
  for (int i = 0; i <= 2000; ++i) {
    const double s = 2.0 * i / 2000.0;
    for (int j = 0; j < 64; ++j) {
      const double a = 2.0 * M_PI * j / 64.0;
      best = std::min(best, (vec({s * std::cos(a), s * std::sin(a), s}) - z).norm());
    }
  }
  CHECK((p - z).norm() <= best + 1e-12);
  CHECK(best - (p - z).norm() <= 1e-3);

  // Points on the boundary or inside stay put.
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Vector x = rng.normal_vector(2);
    const double eps = rng.uniform(0.0, 0.5);
    Vector in(3);
    in << x, x.norm() * (1.0 + eps);
    CHECK(project_soc(in, 1.0) == in);
  }

  CHECK_THROWS_AS(project_soc(vec({1}), 1.0), ContractViolation);
  CHECK_THROWS_AS(project_soc(vec({1, 1}), 0.0), ContractViolation);
}

TEST_CASE("ball intersected with cone") {
  CHECK(project_ball_cap_cone(vec({0.1, 0, 0.5}), 1.0, 1.0) == vec({0.1, 0, 0.5}));
  CHECK(max_abs(project_ball_cap_cone(vec({0, 0, 5}), 1.0, 1.0) - vec({0, 0, 1})) <=
        1e-15);
  const Vector p = project_ball_cap_cone(vec({2, 0, 0}), 1.0, 1.0);
  const double h = std::sqrt(2.0) / 2.0;
  CHECK(max_abs(p - vec({h, 0, h})) <= 1e-15);
  const Vector oracle = dykstra_project(
      vec({2, 0, 0}), {SecondOrderCone{1.0, 3}, Ball{1.0, Vector::Zero(3)}});
  CHECK(max_abs(p - oracle) <= 1e-8);

  CHECK_THROWS_AS(project_ball_cap_cone(vec({1, 1}), 0.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(project_ball_cap_cone(vec({1, 1}), 1.0, -1.0), ContractViolation);
  CHECK_THROWS_AS(project_ball_cap_cone(vec({1}), 1.0, 1.0), ContractViolation);
}

TEST_CASE("ball intersected with cone agrees with Dykstra on random points") {
  Rng rng(500);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const double r = rng.uniform(0.3, 3.0), beta = rng.uniform(0.1, 2.0);
    const Vector z = 3.0 * rng.normal_vector(3);
    const Vector p = project_ball_cap_cone(z, r, beta);
    const Vector oracle =
        dykstra_project(z, {SecondOrderCone{beta, 3}, Ball{r, Vector::Zero(3)}});
    CHECK(max_abs(p - oracle) <= 1e-8);
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("projection properties on random sets") {
  Rng rng(1000);
  for (int pair = 0; pair < 1000; ++pair) {
    const int kind = static_cast<int>(rng.integer(0, 4));
    const Index n = rng.integer(2, 5);
    const SetDescriptor set = random_set(rng, kind, n);
    CAPTURE(set_type_name(set));
    const Vector z = 3.0 * rng.normal_vector(n);
    const Vector p = project(set, z);

    CHECK(contains(set, p, 1e-10));
    CHECK(max_abs(project(set, p) - p) <= 1e-12 * std::max(1.0, p.norm()));

    const Vector z2 = 3.0 * rng.normal_vector(n);
    CHECK((project(set, z2) - p).norm() <= (z2 - z).norm() + 1e-12);

    const double dist = (p - z).norm();
    bool optimal = true;
    for (int k = 0; k < 1000; ++k) {
      const Vector y = random_member(rng, set);
      if (dist > (y - z).norm() + 1e-9) optimal = false;
    }
    CHECK(optimal);

    Vector in_place = z;
    project_in_place(set, in_place);
    CHECK(in_place == p);
  }
}

TEST_CASE("random members really are members") {
  Rng rng(8);
  for (int kind = 0; kind <= 4; ++kind) {
    const SetDescriptor set = random_set(rng, kind, 3);
    for (int k = 0; k < 100; ++k) CHECK(contains(set, random_member(rng, set), 1e-12));
  }
}

TEST_CASE("set validation and metadata") {
  CHECK_THROWS_AS(validate(Box{vec({1}), vec({0})}), ContractViolation);
  CHECK_THROWS_AS(validate(Box{vec({1, 2}), vec({3})}), ContractViolation);
  CHECK_THROWS_AS(validate(Ball{-1.0, vec({0})}), ContractViolation);
  CHECK_THROWS_AS(validate(HalfSpace{vec({0, 0}), 1.0}), ContractViolation);
  CHECK_THROWS_AS(validate(SecondOrderCone{0.0, 3}), ContractViolation);
  CHECK_THROWS_AS(validate(SecondOrderCone{1.0, 1}), ContractViolation);
  CHECK_THROWS_AS(validate(BallCapCone{0.0, 1.0, 3}), ContractViolation);
  CHECK_NOTHROW(validate(FullSpace{4}));
  CHECK_NOTHROW(validate(Box{vec({-INFINITY}), vec({INFINITY})}));

  CHECK(set_dimension(Box{vec({0, 0}), vec({1, 1})}) == 2);
  CHECK(set_dimension(SecondOrderCone{1.0, 3}) == 3);
  CHECK(set_type_name(Box{}) == "box");
  CHECK(set_type_name(Ball{}) == "ball");
  CHECK(set_type_name(HalfSpace{}) == "halfspace");
  CHECK(set_type_name(SecondOrderCone{}) == "soc");
  CHECK(set_type_name(BallCapCone{}) == "ball_cap_cone");
  CHECK(set_type_name(FullSpace{}) == "full");
}

TEST_CASE("product set") {
  SUBCASE("full space is the identity") {
    const ProductSet d = ProductSet::full_space(4);
    const Vector z = vec({1, -2, 3, 1e9});
    CHECK(d.project(z) == z);
    CHECK(d.dim() == 4);
    CHECK(ProductSet::full_space(0).blocks().empty());
  }
  SUBCASE("box times ball") {
    ProductSet d;
    d.append(Box{Vector::Constant(2, -1), Vector::Constant(2, 1)})
        .append(Ball{1.0, Vector::Zero(2)});
    const Vector p = d.project(vec({2, 2, 3, 4}));
    CHECK(max_abs(p - vec({1, 1, 0.6, 0.8})) <= 1e-15);
    CHECK(d.project(p) == p);
    CHECK(d.contains(p));
    CHECK_FALSE(d.contains(vec({2, 2, 3, 4})));
    CHECK_THROWS_AS(d.project(vec({1, 2, 3})), ContractViolation);
  }
  SUBCASE("from_blocks checks coverage") {
    using B = ProductSet::Block;
    CHECK_NOTHROW(ProductSet::from_blocks(
        {B{FullSpace{2}, 0, 2}, B{Ball{1.0, Vector::Zero(1)}, 2, 1}}));
    CHECK_THROWS_AS(ProductSet::from_blocks({B{FullSpace{2}, 1, 2}}), ContractViolation);
    CHECK_THROWS_AS(
        ProductSet::from_blocks({B{FullSpace{2}, 0, 2}, B{FullSpace{1}, 3, 1}}),
        ContractViolation);
    CHECK_THROWS_AS(ProductSet::from_blocks({B{FullSpace{2}, 0, 3}}), ContractViolation);
  }
  SUBCASE("idempotent on random products") {
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
      ProductSet d;
      const int blocks = static_cast<int>(rng.integer(1, 6));
      for (int b = 0; b < blocks; ++b) {
        d.append(random_set(rng, static_cast<int>(rng.integer(0, 4)), rng.integer(2, 4)));
      }
      const Vector z = 3.0 * rng.normal_vector(d.dim());
      const Vector p = d.project(z);
      CHECK(max_abs(d.project(p) - p) <= 1e-12 * std::max(1.0, p.norm()));
      CHECK(d.contains(p, 1e-10));
    }
  }
}
