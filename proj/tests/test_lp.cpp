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

#include <cmath>

#include "doctest.h"
#include "mcgs/lp.hpp"
#include "mcgs/matrix_game.hpp"

namespace mcgs {
namespace {

Matrix from_rows(const std::vector<Vec>& rows) {
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      m.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
  }
  return m;
}

TEST_SUITE_BEGIN("lp");

TEST_CASE("small maximization with inequalities") {
  // max 3x + 2y st x + y <= 4, x + 3y <= 6 -> x=4, y=0, value 12.
  LpProblem lp;
  lp.n = 2;
  lp.maximize = true;
  lp.c = {3.0, 2.0};
  lp.a_ub = from_rows({{1.0, 1.0}, {1.0, 3.0}});
  lp.b_ub = {4.0, 6.0};
  LpResult r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.value == doctest::Approx(12.0));
  CHECK(r.x[0] == doctest::Approx(4.0));
  CHECK(r.x[1] == doctest::Approx(0.0));
  // Strong duality: value equals b.y.
  CHECK(dot(lp.b_ub, r.dual_ub) == doctest::Approx(12.0));
}

TEST_CASE("equality constraints and duals") {
  // min x + 2y + 3z st x + y + z = 1, y - z = 0.2 over the simplex slice.
  LpProblem lp;
  lp.n = 3;
  lp.c = {1.0, 2.0, 3.0};
  lp.a_eq = from_rows({{1.0, 1.0, 1.0}, {0.0, 1.0, -1.0}});
  lp.b_eq = {1.0, 0.2};
  LpResult r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.x[0] == doctest::Approx(0.8));
  CHECK(r.x[1] == doctest::Approx(0.2));
  CHECK(r.x[2] == doctest::Approx(0.0));
  CHECK(r.value == doctest::Approx(1.2));
  CHECK(dot(lp.b_eq, r.dual_eq) == doctest::Approx(1.2));
}

TEST_CASE("negative right-hand sides") {
  // min x st -x <= -2  (x >= 2).
  LpProblem lp;
  lp.n = 1;
  lp.c = {1.0};
  lp.a_ub = from_rows({{-1.0}});
  lp.b_ub = {-2.0};
  LpResult r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(dot(lp.b_ub, r.dual_ub) == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded detected") {
  LpProblem bad;
  bad.n = 2;
  bad.c = {1.0, 1.0};
  bad.a_eq = from_rows({{1.0, 1.0}});
  bad.b_eq = {1.0};
  bad.a_ub = from_rows({{1.0, 1.0}});
  bad.b_ub = {0.2};
  CHECK(lp_solve(bad).status == LpStatus::kInfeasible);

  LpProblem unb;
  unb.n = 2;
  unb.maximize = true;
  unb.c = {1.0, 0.0};
  unb.a_ub = from_rows({{0.0, 1.0}});
  unb.b_ub = {1.0};
  CHECK(lp_solve(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("redundant equality rows") {
  LpProblem lp;
  lp.n = 2;
  lp.maximize = true;
  lp.c = {1.0, 2.0};
  lp.a_eq = from_rows({{1.0, 1.0}, {2.0, 2.0}});
  lp.b_eq = {1.0, 2.0};
  LpResult r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(r.x[1] == doctest::Approx(1.0));
}

TEST_CASE("degenerate problems terminate") {
  // Many tied vertices at the origin; exercises the stall fallback.
  LpProblem lp;
  lp.n = 4;
  lp.maximize = true;
  lp.c = {0.75, -150.0, 0.02, -6.0};
  lp.a_ub = from_rows({{0.25, -60.0, -0.04, 9.0},
                       {0.5, -90.0, -0.02, 3.0},
                       {0.0, 0.0, 1.0, 0.0}});
  lp.b_ub = {0.0, 0.0, 1.0};
  LpResult r = lp_solve(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.value == doctest::Approx(0.05));
}

TEST_CASE("matching pennies") {
  MatrixGameSolution s =
      solve_matrix_game(from_rows({{1.0, -1.0}, {-1.0, 1.0}}));
  CHECK(s.value == doctest::Approx(0.0));
  CHECK(s.row_strategy[0] == doctest::Approx(0.5));
  CHECK(s.col_strategy[0] == doctest::Approx(0.5));
  CHECK(s.gap < 1e-9);
}

TEST_CASE("asymmetric two by two game") {
  // Mixed value 1/7 at x = (3/7, 4/7).
  MatrixGameSolution s =
      solve_matrix_game(from_rows({{3.0, -1.0}, {-2.0, 1.0}}));
  CHECK(s.value == doctest::Approx(1.0 / 7));
  CHECK(s.row_strategy[0] == doctest::Approx(3.0 / 7));
  CHECK(s.gap < 1e-9);
}

TEST_CASE("pure saddle point") {
  MatrixGameSolution s = solve_matrix_game(from_rows({{2.0, 1.0}, {0.0, -1.0}}));
  CHECK(s.value == doctest::Approx(1.0));
  CHECK(s.row_strategy[0] == doctest::Approx(1.0));
  CHECK(s.col_strategy[1] == doctest::Approx(1.0));
}

TEST_CASE("single row or column") {
  MatrixGameSolution s = solve_matrix_game(from_rows({{0.3, -0.7, 0.1}}));
  CHECK(s.value == doctest::Approx(-0.7));
  MatrixGameSolution t = solve_matrix_game(from_rows({{0.3}, {-0.7}, {0.1}}));
  CHECK(t.value == doctest::Approx(0.3));
}

TEST_CASE("transposition negates the value") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    int nr = 2 + static_cast<int>(rng.uniform() * 5);
    int nc = 2 + static_cast<int>(rng.uniform() * 5);
    Matrix a(nr, nc);
    for (int r = 0; r < nr; ++r) {
      for (int c = 0; c < nc; ++c) a.at(r, c) = rng.uniform_in(-1.0, 1.0);
    }
    Matrix neg_t(nc, nr);
    for (int r = 0; r < nr; ++r) {
      for (int c = 0; c < nc; ++c) neg_t.at(c, r) = -a.at(r, c);
    }
    MatrixGameSolution s1 = solve_matrix_game(a);
    MatrixGameSolution s2 = solve_matrix_game(neg_t);
    CHECK(s1.value == doctest::Approx(-s2.value).epsilon(1e-8));
    CHECK(s1.gap < 1e-8);
    CHECK(s2.gap < 1e-8);
  }
}

TEST_CASE("moderately large random game is consistent") {
  Rng rng(99);
  Matrix a(40, 55);
  for (int r = 0; r < 40; ++r) {
    for (int c = 0; c < 55; ++c) a.at(r, c) = rng.uniform_in(-1.0, 1.0);
  }
  MatrixGameSolution s = solve_matrix_game(a);
  CHECK(s.gap < 1e-8);
  double sum = 0.0;
  for (double w : s.row_strategy) {
    CHECK(w >= 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0));
  // Identical inputs give identical outputs.
  MatrixGameSolution s2 = solve_matrix_game(a);
  CHECK(s.value == s2.value);
  CHECK(s.row_strategy == s2.row_strategy);
  CHECK(s.col_strategy == s2.col_strategy);
}

TEST_SUITE_END();

}  // namespace
}  // namespace mcgs
