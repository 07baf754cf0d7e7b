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

// Closed-form Euclidean projections onto the simple sets that make up the
// constraint set D, and onto Cartesian products of them.

#include <string>
#include <variant>
#include <vector>

#include "pipg/linalg.hpp"

namespace pipg {

// {z : lower <= z <= upper}
struct Box {
  Vector lower;
  Vector upper;
};

// {z : ||z - center|| <= radius}
struct Ball {
  double radius = 1.0;
  Vector center;
};

// {z : normal^T z <= offset}
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
};

// {(x, t) : ||x|| <= ratio * t}; the last coordinate is t.
struct SecondOrderCone {
  double ratio = 1.0;
  Index dim = 2;
};

// Origin-centered ball of the given radius intersected with
// SecondOrderCone{ratio, dim}.
struct BallCapCone {
  double radius = 1.0;
  double ratio = 1.0;
  Index dim = 2;
};

struct FullSpace {
  Index dim = 0;
};

using SetDescriptor =
    std::variant<Box, Ball, HalfSpace, SecondOrderCone, BallCapCone, FullSpace>;

Index set_dimension(const SetDescriptor& set);
std::string set_type_name(const SetDescriptor& set);

// Throws ContractViolation when the descriptor's invariants do not hold.
void validate(const SetDescriptor& set);

// Membership up to an absolute slack.
bool contains(const SetDescriptor& set, const Vector& z, double tol = 1e-12);

Vector project_box(const Vector& z, const Vector& lower, const Vector& upper);
Vector project_ball(const Vector& z, double radius, const Vector& center);
Vector project_halfspace(const Vector& z, const Vector& normal, double offset);
Vector project_soc(const Vector& z, double ratio);
Vector project_ball_cap_cone(const Vector& z, double radius, double ratio);

// Projects z onto one set. z.size() must equal set_dimension(set).
Vector project(const SetDescriptor& set, const Vector& z);
void project_in_place(const SetDescriptor& set, Eigen::Ref<Vector> z);

// An ordered list of sets acting on consecutive, disjoint blocks of z.
class ProductSet {
 public:
  struct Block {
    SetDescriptor set;
    Index offset = 0;
    Index size = 0;
  };

  ProductSet() = default;

  // Single FullSpace block of the given dimension (or empty for dim 0).
  static ProductSet full_space(Index dim);

  // Builds from explicit (set, offset) blocks; throws ContractViolation unless
  // the blocks are contiguous and start at 0.
  static ProductSet from_blocks(std::vector<Block> blocks);

  // Appends a block right after the previous one.
  ProductSet& append(SetDescriptor set);

  Index dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  // Throws ContractViolation when z does not have length dim().
  Vector project(const Vector& z) const;
  void project_in_place(Eigen::Ref<Vector> z) const;
  bool contains(const Vector& z, double tol = 1e-12) const;

 private:
  std::vector<Block> blocks_;
  Index dim_ = 0;
};

}  // namespace pipg
