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
#include "pipg/projections.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pipg/errors.hpp"

namespace pipg {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_size(Index got, Index want, const char* what) {
  if (got != want) {
    throw ContractViolation(std::string(what) + ": length " +
                            std::to_string(got) + ", expected " +
                            std::to_string(want));
  }
}

void box_in_place(Eigen::Ref<Vector> z, const Vector& lower,
                  const Vector& upper) {
  z = z.cwiseMax(lower).cwiseMin(upper);
}

void ball_in_place(Eigen::Ref<Vector> z, double radius, const Vector& center) {
  const double dist = (z - center).norm();
  if (dist <= radius) return;
  z = center + (radius / dist) * (z - center);
}

void origin_ball_in_place(Eigen::Ref<Vector> z, double radius) {
  const double norm = z.norm();
  if (norm <= radius) return;
  z *= radius / norm;
}

void halfspace_in_place(Eigen::Ref<Vector> z, const Vector& normal,
                        double offset) {
  const double excess = normal.dot(z) - offset;
  if (excess <= 0.0) return;
  z -= (excess / normal.squaredNorm()) * normal;
}

void soc_in_place(Eigen::Ref<Vector> z, double ratio) {
  const Index k = z.size() - 1;
  auto x = z.head(k);
  double& t = z(k);
  const double x_norm = x.norm();
  if (x_norm <= ratio * t) return;
  if (ratio * x_norm <= -t) {
    z.setZero();
    return;
  }
  // Project onto the boundary ray spanned by (ratio * x / |x|, 1).
  const double lambda = (ratio * x_norm + t) / (ratio * ratio + 1.0);
  x *= lambda * ratio / x_norm;
  t = lambda;
}

}  // namespace

Index set_dimension(const SetDescriptor& set) {
  return std::visit(
      Overloaded{
          [](const Box& s) { return s.lower.size(); },
          [](const Ball& s) { return s.center.size(); },
          [](const HalfSpace& s) { return s.normal.size(); },
          [](const SecondOrderCone& s) { return s.dim; },
          [](const BallCapCone& s) { return s.dim; },
          [](const FullSpace& s) { return s.dim; },
      },
      set);
}

std::string set_type_name(const SetDescriptor& set) {
  return std::visit(Overloaded{
                        [](const Box&) { return "box"; },
                        [](const Ball&) { return "ball"; },
                        [](const HalfSpace&) { return "halfspace"; },
                        [](const SecondOrderCone&) { return "soc"; },
                        [](const BallCapCone&) { return "ball_cap_cone"; },
                        [](const FullSpace&) { return "full"; },
                    },
                    set);
}

void validate(const SetDescriptor& set) {
  std::visit(
      Overloaded{
          [](const Box& s) {
            require_size(s.upper.size(), s.lower.size(), "box upper bound");
            if ((s.lower.array() > s.upper.array()).any()) {
              throw ContractViolation("box: lower > upper");
            }
            if (s.lower.array().isNaN().any() || s.upper.array().isNaN().any()) {
              throw ContractViolation("box: NaN bound");
            }
          },
          [](const Ball& s) {
            if (!(s.radius > 0.0)) throw ContractViolation("ball: radius <= 0");
            if (!s.center.allFinite()) {
              throw ContractViolation("ball: non-finite center");
            }
          },
          [](const HalfSpace& s) {
            if (!s.normal.allFinite() || !std::isfinite(s.offset)) {
              throw ContractViolation("halfspace: non-finite data");
            }
            if (s.normal.squaredNorm() == 0.0) {
              throw ContractViolation("halfspace: zero normal");
            }
          },
          [](const SecondOrderCone& s) {
            if (!(s.ratio > 0.0)) throw ContractViolation("soc: ratio <= 0");
            if (s.dim < 2) throw ContractViolation("soc: dim < 2");
          },
          [](const BallCapCone& s) {
            if (!(s.ratio > 0.0)) {
              throw ContractViolation("ball_cap_cone: ratio <= 0");
            }
            if (!(s.radius > 0.0)) {
              throw ContractViolation("ball_cap_cone: radius <= 0");
            }
            if (s.dim < 2) throw ContractViolation("ball_cap_cone: dim < 2");
          },
          [](const FullSpace& s) {
            if (s.dim < 0) throw ContractViolation("full space: dim < 0");
          },
      },
      set);
}

bool contains(const SetDescriptor& set, const Vector& z, double tol) {
  require_size(z.size(), set_dimension(set), "contains");
  return std::visit(
      Overloaded{
          [&](const Box& s) {
            return ((z - s.lower).array() >= -tol).all() &&
                   ((s.upper - z).array() >= -tol).all();
          },
          [&](const Ball& s) { return (z - s.center).norm() <= s.radius + tol; },
          [&](const HalfSpace& s) { return s.normal.dot(z) <= s.offset + tol; },
          [&](const SecondOrderCone& s) {
            const Index k = z.size() - 1;
            return z.head(k).norm() <= s.ratio * z(k) + tol;
          },
          [&](const BallCapCone& s) {
            const Index k = z.size() - 1;
            return z.head(k).norm() <= s.ratio * z(k) + tol &&
                   z.norm() <= s.radius + tol;
          },
          [&](const FullSpace&) { return z.allFinite(); },
      },
      set);
}

Vector project_box(const Vector& z, const Vector& lower, const Vector& upper) {
  require_size(lower.size(), z.size(), "project_box lower");
  require_size(upper.size(), z.size(), "project_box upper");
  Vector out = z;
  box_in_place(out, lower, upper);
  return out;
}

Vector project_ball(const Vector& z, double radius, const Vector& center) {
  require_size(center.size(), z.size(), "project_ball center");
  if (!(radius > 0.0)) throw ContractViolation("project_ball: radius <= 0");
  Vector out = z;
  ball_in_place(out, radius, center);
  return out;
}

Vector project_halfspace(const Vector& z, const Vector& normal, double offset) {
  require_size(normal.size(), z.size(), "project_halfspace normal");
  if (normal.squaredNorm() == 0.0) {
    throw ContractViolation("project_halfspace: zero normal");
  }
  Vector out = z;
  halfspace_in_place(out, normal, offset);
  return out;
}

Vector project_soc(const Vector& z, double ratio) {
  if (z.size() < 2) throw ContractViolation("project_soc: length < 2");
  if (!(ratio > 0.0)) throw ContractViolation("project_soc: ratio <= 0");
  Vector out = z;
  soc_in_place(out, ratio);
  return out;
}

Vector project_ball_cap_cone(const Vector& z, double radius, double ratio) {
  if (z.size() < 2) throw ContractViolation("project_ball_cap_cone: length < 2");
  if (!(ratio > 0.0) || !(radius > 0.0)) {
    throw ContractViolation("project_ball_cap_cone: radius and ratio must be > 0");
  }
  Vector out = z;
  soc_in_place(out, ratio);
  origin_ball_in_place(out, radius);
  return out;
}

void project_in_place(const SetDescriptor& set, Eigen::Ref<Vector> z) {
  std::visit(Overloaded{
                 [&](const Box& s) { box_in_place(z, s.lower, s.upper); },
                 [&](const Ball& s) { ball_in_place(z, s.radius, s.center); },
                 [&](const HalfSpace& s) {
                   halfspace_in_place(z, s.normal, s.offset);
                 },
                 [&](const SecondOrderCone& s) { soc_in_place(z, s.ratio); },
                 [&](const BallCapCone& s) {
                   soc_in_place(z, s.ratio);
                   origin_ball_in_place(z, s.radius);
                 },
                 [](const FullSpace&) {},
             },
             set);
}

Vector project(const SetDescriptor& set, const Vector& z) {
  require_size(z.size(), set_dimension(set), "project");
  Vector out = z;
  project_in_place(set, out);
  return out;
}

ProductSet ProductSet::full_space(Index dim) {
  ProductSet d;
  if (dim > 0) d.append(FullSpace{dim});
  return d;
}

ProductSet ProductSet::from_blocks(std::vector<Block> blocks) {
  ProductSet d;
  for (auto& b : blocks) {
    if (b.offset != d.dim_) {
      throw ContractViolation("product set: block at offset " +
                              std::to_string(b.offset) + " is not contiguous (expected " +
                              std::to_string(d.dim_) + ")");
    }
    if (b.size != set_dimension(b.set)) {
      throw ContractViolation("product set: block size does not match set dimension");
    }
    d.append(std::move(b.set));
  }
  return d;
}

ProductSet& ProductSet::append(SetDescriptor set) {
  validate(set);
  const Index size = set_dimension(set);
  if (size == 0) return *this;
  blocks_.push_back(Block{std::move(set), dim_, size});
  dim_ += size;
  return *this;
}

Vector ProductSet::project(const Vector& z) const {
  Vector out = z;
  project_in_place(out);
  return out;
}

void ProductSet::project_in_place(Eigen::Ref<Vector> z) const {
  require_size(z.size(), dim_, "product set projection");
  for (const auto& b : blocks_) {
    pipg::project_in_place(b.set, z.segment(b.offset, b.size));
  }
}

bool ProductSet::contains(const Vector& z, double tol) const {
  require_size(z.size(), dim_, "product set membership");
  for (const auto& b : blocks_) {
    if (!pipg::contains(b.set, z.segment(b.offset, b.size), tol)) return false;
  }
  return true;
}

}  // namespace pipg
