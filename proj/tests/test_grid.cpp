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
#include "mcgs/polytope.hpp"
#include "mcgs/simplex_grid.hpp"

namespace mcgs {
namespace {

Vec random_belief(Rng& rng, int n) {
  Vec p(n);
  double s = 0.0;
  for (double& x : p) {
    x = rng.uniform();
    s += x;
  }
  for (double& x : p) x /= s;
  return p;
}

TEST_SUITE_BEGIN("grid");

TEST_CASE("grid sizes follow the stars-and-bars count") {
  CHECK(SimplexGrid(1, 5).size() == 1);
  CHECK(SimplexGrid(2, 10).size() == 11);
  CHECK(SimplexGrid(3, 10).size() == 66);
  CHECK(SimplexGrid(4, 6).size() == 84);
}

TEST_CASE("grid points are exact fixed points of interpolation") {
  SimplexGrid g(3, 7);
  std::vector<std::pair<int, double>> w;
  for (int i = 0; i < g.size(); ++i) {
    g.interpolate(g.point(i), w);
    REQUIRE(w.size() == 1);
    CHECK(w[0].first == i);
    CHECK(w[0].second == doctest::Approx(1.0));
  }
}

TEST_CASE("interpolation weights reproduce the query point") {
  Rng rng(5);
  std::vector<std::pair<int, double>> w;
  for (int dim = 2; dim <= 5; ++dim) {
    SimplexGrid g(dim, 6);
    for (int trial = 0; trial < 300; ++trial) {
      Vec p = random_belief(rng, dim);
      g.interpolate(p, w);
      CHECK(static_cast<int>(w.size()) <= dim);
      Vec back(dim, 0.0);
      double total = 0.0;
      for (const auto& [idx, weight] : w) {
        CHECK(weight > 0.0);
        total += weight;
        Vec v = g.point(idx);
        for (int c = 0; c < dim; ++c) back[c] += weight * v[c];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(l1_dist(back, p) < 1e-10);
    }
  }
}

TEST_CASE("interpolation handles simplex corners and edges") {
  SimplexGrid g(3, 4);
  std::vector<std::pair<int, double>> w;
  for (Vec p : {Vec{1.0, 0.0, 0.0}, Vec{0.0, 1.0, 0.0}, Vec{0.0, 0.0, 1.0},
                Vec{0.5, 0.5, 0.0}, Vec{0.0, 0.625, 0.375}}) {
    g.interpolate(p, w);
    Vec back(3, 0.0);
    for (const auto& [idx, weight] : w) {
      Vec v = g.point(idx);
      for (int c = 0; c < 3; ++c) back[c] += weight * v[c];
    }
    CHECK(l1_dist(back, p) < 1e-12);
  }
}

TEST_CASE("affine functions interpolate exactly") {
  SimplexGrid g(4, 5);
  Vec coef = {0.3, -0.7, 0.2, 0.9};
  Rng rng(17);
  std::vector<std::pair<int, double>> w;
  for (int trial = 0; trial < 100; ++trial) {
    Vec p = random_belief(rng, 4);
    g.interpolate(p, w);
    double interp = 0.0;
    for (const auto& [idx, weight] : w) interp += weight * dot(coef, g.point(idx));
    CHECK(interp == doctest::Approx(dot(coef, p)).epsilon(1e-12));
  }
}

TEST_CASE("value table bilinear evaluation") {
  auto grid = make_pair_grid(2, 2, 4);
  ValueTable t(grid, 1.0);
  // f(p, q) = p[0] * q[0] sampled on the grid.
  for (int pi = 0; pi < grid->p.size(); ++pi) {
    for (int qi = 0; qi < grid->q.size(); ++qi) {
      t.at(pi, qi) = grid->p.point(pi)[0] * grid->q.point(qi)[0];
    }
  }
  CHECK(t.eval({0.25, 0.75}, {0.5, 0.5}) == doctest::Approx(0.125));
  // Off-lattice points interpolate within the cell curvature bound.
  double exact = 0.3 * 0.7;
  CHECK(std::fabs(t.eval({0.3, 0.7}, {0.7, 0.3}) - exact) < 0.25 / 16 + 1e-12);
  CHECK(t.interp_error() > 0.0);
}

TEST_CASE("product simplex vertices and grid") {
  Polytope box = Polytope::product_simplex({2, 2});
  auto verts = polytope_vertices(box);
  CHECK(verts.size() == 4);
  for (const Vec& v : verts) CHECK(polytope_contains(box, v));
  auto grid = polytope_grid(box, 2, verts);
  // Nine distinct mixtures at resolution two.
  CHECK(grid.size() == 9);
}

TEST_CASE("equality cut selects the diagonal") {
  Polytope p = Polytope::product_simplex({2, 2});
  p.extra_eq = Matrix(1, 4);
  p.extra_eq.at(0, 0) = 1.0;
  p.extra_eq.at(0, 2) = -1.0;
  p.extra_b = {0.0};
  auto verts = polytope_vertices(p);
  REQUIRE(verts.size() == 2);
  CHECK(l1_dist(verts[0], {0.0, 1.0, 0.0, 1.0}) < 1e-9);
  CHECK(l1_dist(verts[1], {1.0, 0.0, 1.0, 0.0}) < 1e-9);
  Vec feas = polytope_feasible_point(p);
  CHECK(polytope_contains(p, feas));
}

TEST_CASE("infeasible polytope reports empty") {
  Polytope p = Polytope::product_simplex({2});
  p.extra_eq = Matrix(1, 2);
  p.extra_eq.at(0, 0) = 1.0;
  p.extra_b = {2.0};
  CHECK(polytope_vertices(p).empty());
  CHECK_THROWS_AS(polytope_feasible_point(p), Error);
}

TEST_CASE("inequality slice of the simplex") {
  Polytope p = Polytope::product_simplex({3});
  p.extra_ub = Matrix(1, 3);
  p.extra_ub.at(0, 0) = 1.0;
  p.extra_ub_b = {0.25};
  auto verts = polytope_vertices(p);
  // Corners: e2, e3, and the two cut points at x0 = 1/4.
  CHECK(verts.size() == 4);
  for (const Vec& v : verts) {
    CHECK(polytope_contains(p, v));
    CHECK(v[0] <= 0.25 + 1e-9);
  }
}

TEST_SUITE_END();

}  // namespace
}  // namespace mcgs
