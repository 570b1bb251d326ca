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

#include "mcgs/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcgs/lp.hpp"

namespace mcgs {

MatrixGameSolution solve_matrix_game(const Matrix& a) {
  int nr = a.rows(), nc = a.cols();
  if (nr == 0 || nc == 0) fail(ErrorCode::kBadArgument, "empty game matrix");

  // Shift all payoffs above one so the value is positive, then solve
  //   maximize sum(w)  s.t.  (A + shift) w <= 1, w >= 0.
  // The column strategy is w normalized; the row strategy is the dual.
  double lo = std::numeric_limits<double>::infinity();
  for (int r = 0; r < nr; ++r) {
    for (int c = 0; c < nc; ++c) lo = std::min(lo, a.at(r, c));
  }
  double shift = 1.0 - lo;

  LpProblem lp;
  lp.n = nc;
  lp.maximize = true;
  lp.c.assign(nc, 1.0);
  lp.a_ub = Matrix(nr, nc);
  lp.b_ub.assign(nr, 1.0);
  for (int r = 0; r < nr; ++r) {
    for (int c = 0; c < nc; ++c) lp.a_ub.at(r, c) = a.at(r, c) + shift;
  }
  LpResult res = lp_solve(lp);
  if (res.status != LpStatus::kOptimal || res.value <= 0.0) {
    fail(ErrorCode::kLpFailure, "matrix game solve failed");
  }

  MatrixGameSolution sol;
  double shifted_value = 1.0 / res.value;
  sol.value = shifted_value - shift;

  sol.col_strategy.assign(nc, 0.0);
  double wsum = 0.0;
  for (int c = 0; c < nc; ++c) wsum += std::max(0.0, res.x[c]);
  for (int c = 0; c < nc; ++c) sol.col_strategy[c] = std::max(0.0, res.x[c]) / wsum;

  sol.row_strategy.assign(nr, 0.0);
  double usum = 0.0;
  for (int r = 0; r < nr; ++r) usum += std::max(0.0, res.dual_ub[r]);
  if (usum <= 0.0) fail(ErrorCode::kLpFailure, "degenerate matrix game duals");
  for (int r = 0; r < nr; ++r) {
    sol.row_strategy[r] = std::max(0.0, res.dual_ub[r]) / usum;
  }

  // Regret of the returned pair, from exact best responses.
  double upper = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < nr; ++r) {
    double v = 0.0;
    for (int c = 0; c < nc; ++c) v += a.at(r, c) * sol.col_strategy[c];
    upper = std::max(upper, v);
  }
  double lower = std::numeric_limits<double>::infinity();
  for (int c = 0; c < nc; ++c) {
    double v = 0.0;
    for (int r = 0; r < nr; ++r) v += a.at(r, c) * sol.row_strategy[r];
    lower = std::min(lower, v);
  }
  sol.gap = std::max(0.0, upper - lower);
  return sol;
}

}  // namespace mcgs
