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

#ifndef MCGS_LP_HPP_
#define MCGS_LP_HPP_

#include <vector>

#include "mcgs/common.hpp"

namespace mcgs {

// Linear program over nonnegative variables:
//   optimize c.x  subject to  a_eq x = b_eq,  a_ub x <= b_ub,  x >= 0.
struct LpProblem {
  int n = 0;
  Vec c;
  bool maximize = false;
  Matrix a_eq;  // may be 0 x n
  Vec b_eq;
  Matrix a_ub;  // may be 0 x n
  Vec b_ub;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kFailure };

// Optimal solutions are basic: at most rank(active constraints) nonzero
// entries. Duals are in the sense of the stated problem, so that
// value = b_eq.dual_eq + b_ub.dual_ub at optimality.
struct LpResult {
  LpStatus status = LpStatus::kFailure;
  double value = 0.0;
  Vec x;
  Vec dual_eq;
  Vec dual_ub;
};

// Dense two-phase simplex. Pivoting is deterministic (largest reduced cost,
// ties to the lowest index, with a Bland fallback on degeneracy stalls), so
// repeated solves of the same problem return identical results.
LpResult lp_solve(const LpProblem& problem);

}  // namespace mcgs

#endif  // MCGS_LP_HPP_
