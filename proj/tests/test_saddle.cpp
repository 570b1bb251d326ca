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
#include "mcgs/matrix_game.hpp"
#include "mcgs/saddle.hpp"

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

double bilinear(const Matrix& a, const Vec& x, const Vec& y) {
  double v = 0.0;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) v += x[r] * a.at(r, c) * y[c];
  }
  return v;
}

TEST_SUITE_BEGIN("saddle");

TEST_CASE("bilinear objective recovers the matrix game") {
  Matrix a = from_rows({{3.0, -1.0}, {-2.0, 1.0}});  // value 1/7
  FunctionObjective obj(
      [&a](const Vec& x, const Vec& y) { return bilinear(a, x, y); });
  SaddleDomain dx = SaddleDomain::product({2});
  SaddleDomain dy = SaddleDomain::product({2});
  SaddleOptions opt;
  SaddleResult r = saddle_eval(obj, dx, dy, opt);
  CHECK(r.tolerance_reached);
  CHECK(r.gap <= 1e-8);
  CHECK(r.value == doctest::Approx(1.0 / 7).epsilon(1e-9));
  CHECK(r.x[0] == doctest::Approx(3.0 / 7));
  CHECK(r.y[0] == doctest::Approx(2.0 / 7));
  // Resolution one already spans the simplex; no refinement needed.
  CHECK(r.resolution_x == 1);
  CHECK(r.resolution_y == 1);
}

// Coupled quadratic with an interior saddle at x0 = 38/85, y0 = 10/17 and
// value 884/7225; the coarse grids must refine to approach it.
double coupled_quadratic(const Vec& x, const Vec& y) {
  return -(x[0] - 0.3) * (x[0] - 0.3) + (y[0] - 0.7) * (y[0] - 0.7) +
         0.5 * x[0] * y[0];
}

TEST_CASE("smooth concave-convex objective refines to tolerance") {
  FunctionObjective obj(coupled_quadratic);
  SaddleDomain dx = SaddleDomain::product({2});
  SaddleDomain dy = SaddleDomain::product({2});
  SaddleOptions opt;
  opt.tol = 1e-3;
  SaddleResult r = saddle_eval(obj, dx, dy, opt);
  CHECK(r.tolerance_reached);
  CHECK(r.gap <= 1e-3);
  CHECK(r.resolution_x > 1);
  CHECK(std::fabs(r.value - 884.0 / 7225) <= 5e-3);
  // Flat curvature near the optimum localizes the point only loosely.
  CHECK(std::fabs(r.x[0] - 38.0 / 85) <= 0.1);
  CHECK(std::fabs(r.y[0] - 10.0 / 17) <= 0.1);
}

TEST_CASE("refinement caps yield a soft failure with a finite gap") {
  FunctionObjective obj(coupled_quadratic);
  SaddleDomain dx = SaddleDomain::product({2});
  SaddleDomain dy = SaddleDomain::product({2});
  SaddleOptions opt;
  opt.tol = 1e-12;
  // The vertex game alone cannot certify this interior saddle.
  opt.max_resolution = 1;
  SaddleResult r = saddle_eval(obj, dx, dy, opt);
  CHECK_FALSE(r.tolerance_reached);
  CHECK(r.gap > 0.0);
  CHECK(r.gap < 0.5);
  CHECK(std::isfinite(r.value));
}

TEST_CASE("equality-cut polytope domain pins one side") {
  // x restricted to (1/2, 1/2); matching pennies then has value 0 at once.
  Matrix a = from_rows({{1.0, -1.0}, {-1.0, 1.0}});
  FunctionObjective obj(
      [&a](const Vec& x, const Vec& y) { return bilinear(a, x, y); });
  Polytope poly;
  poly.blocks = {2};
  poly.extra_eq = from_rows({{1.0, -1.0}});
  poly.extra_b = {0.0};
  SaddleDomain dx = SaddleDomain::from_polytope(poly);
  SaddleDomain dy = SaddleDomain::product({2});
  SaddleOptions opt;
  SaddleResult r = saddle_eval(obj, dx, dy, opt);
  CHECK(r.tolerance_reached);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.x[0] == doctest::Approx(0.5));
  CHECK(r.x[1] == doctest::Approx(0.5));
}

TEST_CASE("product of two blocks optimizes each factor") {
  // phi = 0.5 x^0 A0 y + 0.5 x^1 A1 y; picking row 0 in block 0 and row 1
  // in block 1 guarantees 0.5 against every y.
  Matrix a0 = from_rows({{1.0, 0.0}, {0.0, 0.0}});
  Matrix a1 = from_rows({{0.0, 0.0}, {0.0, 1.0}});
  FunctionObjective obj([&](const Vec& x, const Vec& y) {
    Vec x0 = {x[0], x[1]}, x1 = {x[2], x[3]};
    return 0.5 * bilinear(a0, x0, y) + 0.5 * bilinear(a1, x1, y);
  });
  SaddleDomain dx = SaddleDomain::product({2, 2});
  SaddleDomain dy = SaddleDomain::product({2});
  SaddleOptions opt;
  SaddleResult r = saddle_eval(obj, dx, dy, opt);
  CHECK(r.tolerance_reached);
  CHECK(r.value == doctest::Approx(0.5));
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[3] == doctest::Approx(1.0));
}

TEST_CASE("solves are deterministic") {
  FunctionObjective obj([](const Vec& x, const Vec& y) {
    return -(x[0] - 0.4) * (x[0] - 0.4) + 0.3 * x[0] * y[0] +
           (y[0] - 0.5) * (y[0] - 0.5);
  });
  SaddleDomain dx = SaddleDomain::product({2});
  SaddleDomain dy = SaddleDomain::product({2});
  SaddleOptions opt;
  opt.tol = 1e-4;
  SaddleResult r1 = saddle_eval(obj, dx, dy, opt);
  SaddleResult r2 = saddle_eval(obj, dx, dy, opt);
  CHECK(r1.value == r2.value);
  CHECK(r1.gap == r2.gap);
  CHECK(r1.x == r2.x);
  CHECK(r1.y == r2.y);
}

TEST_SUITE_END();

}  // namespace
}  // namespace mcgs
