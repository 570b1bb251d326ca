// Copyright 2026 The mcgs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MCGS_POLYTOPE_HPP_
#define MCGS_POLYTOPE_HPP_

#include <vector>

#include "mcgs/common.hpp"

namespace mcgs {

// Bounded feasible set over nonnegative variables arranged in simplex
// blocks (each block sums to one), cut by optional extra equalities and
// inequalities. Typical instance: behavioral actions Delta(I)^K with
// revelation constraints.
struct Polytope {
  std::vector<int> blocks;
  Matrix extra_eq;  // rows x dim()
  Vec extra_b;
  Matrix extra_ub;
  Vec extra_ub_b;

  int dim() const {
    int n = 0;
    for (int b : blocks) n += b;
    return n;
  }

  static Polytope product_simplex(const std::vector<int>& blocks);
};

// All vertices (basic feasible points), deduplicated, in a deterministic
// order. Enumeration cost grows combinatorially; dimension is capped.
std::vector<Vec> polytope_vertices(const Polytope& poly);

bool polytope_contains(const Polytope& poly, const Vec& x, double tol = 1e-9);

// Any feasible point; throws Infeasible when the set is empty.
Vec polytope_feasible_point(const Polytope& poly);

// Convex-combination grid: denominator-`resolution` weightings of the
// vertex list, deduplicated. Pass precomputed vertices to skip enumeration.
std::vector<Vec> polytope_grid(const Polytope& poly, int resolution,
                               const std::vector<Vec>& vertices);

}  // namespace mcgs

#endif  // MCGS_POLYTOPE_HPP_
