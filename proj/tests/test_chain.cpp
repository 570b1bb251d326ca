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
#include "mcgs/chain.hpp"

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

StochasticMatrix two_class_chain() {
  return StochasticMatrix(from_rows({{2.0 / 3, 1.0 / 3, 0.0},
                                     {1.0 / 3, 2.0 / 3, 0.0},
                                     {0.0, 0.0, 1.0}}));
}

double limit_residual(const ChainAnalysis& a) {
  const Matrix& b = a.limit_matrix;
  Matrix bb = mat_mul(b, b);
  Matrix bm = mat_mul(b, a.matrix);
  Matrix mb = mat_mul(a.matrix, b);
  double res = 0.0;
  for (int i = 0; i < b.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      res = std::max(res, std::fabs(bb.at(i, j) - b.at(i, j)));
      res = std::max(res, std::fabs(bm.at(i, j) - b.at(i, j)));
      res = std::max(res, std::fabs(mb.at(i, j) - b.at(i, j)));
    }
  }
  return res;
}

Vec random_belief(Rng& rng, int n) {
  Vec p(n);
  double s = 0.0;
  for (double& x : p) {
    x = rng.uniform() + 1e-3;
    s += x;
  }
  for (double& x : p) x /= s;
  return p;
}

TEST_SUITE_BEGIN("chain");

TEST_CASE("two-class chain decomposition") {
  ChainAnalysis a = analyze_chain(two_class_chain());
  REQUIRE(a.num_classes() == 2);
  CHECK(a.classes[0] == std::vector<int>{0, 1});
  CHECK(a.classes[1] == std::vector<int>{2});
  CHECK(a.period == 1);
  CHECK_FALSE(a.has_transient);
  CHECK(a.invariant_measures[0][0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.invariant_measures[0][1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(a.invariant_measures[0][2] == 0.0);
  CHECK(a.invariant_measures[1][2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(limit_residual(a) < 1e-10);
}

TEST_CASE("skewed irreducible chain invariant measure") {
  StochasticMatrix n(from_rows({{0.75, 0.25}, {1.0, 0.0}}));
  ChainAnalysis a = analyze_chain(n);
  REQUIRE(a.num_classes() == 1);
  CHECK(a.invariant_measures[0][0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(a.invariant_measures[0][1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(a.period == 1);
  CHECK(limit_residual(a) < 1e-10);
}

TEST_CASE("swap chain has period two and identity lift") {
  StochasticMatrix swap(from_rows({{0.0, 1.0}, {1.0, 0.0}}));
  ChainAnalysis a = analyze_chain(swap);
  REQUIRE(a.num_classes() == 1);
  CHECK(a.period == 2);
  StochasticMatrix lifted = aperiodic_lift(a);
  CHECK(lifted.at(0, 0) == doctest::Approx(1.0));
  CHECK(lifted.at(1, 1) == doctest::Approx(1.0));
  ChainAnalysis la = analyze_chain(lifted);
  CHECK(la.num_classes() == 2);
  CHECK(la.period == 1);
}

TEST_CASE("transient states rejected unless allowed") {
  StochasticMatrix m(from_rows(
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.5, 0.25, 0.25}}));
  CHECK_THROWS_WITH_AS(analyze_chain(m), doctest::Contains("transient"),
                       Error);
  ChainAnalysis a = analyze_chain(m, /*allow_transient=*/true);
  CHECK(a.has_transient);
  CHECK(a.transient == std::vector<int>{2});
  REQUIRE(a.num_classes() == 2);
  // Absorption from the transient state: two thirds up, one third down.
  CHECK(a.limit_matrix.at(2, 0) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(a.limit_matrix.at(2, 1) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(a.limit_matrix.at(2, 2) == doctest::Approx(0.0));
  CHECK(limit_residual(a) < 1e-10);
}

TEST_CASE("limit matrix matches a large chain power") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m(3, 3);
    for (int r = 0; r < 3; ++r) {
      Vec row = random_belief(rng, 3);
      for (int c = 0; c < 3; ++c) m.at(r, c) = row[c];
    }
    ChainAnalysis a = analyze_chain(StochasticMatrix(m));
    Matrix big = mat_pow(m, 1 << 20);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        CHECK(big.at(r, c) == doctest::Approx(a.limit_matrix.at(r, c))
                                  .epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("lambda decomposition recombines and defaults to invariants") {
  ChainAnalysis a = analyze_chain(two_class_chain());
  Vec p = {0.2, 0.3, 0.5};
  LambdaDecomposition d = lambda_decompose(p, a);
  CHECK(d.lambda[0] == doctest::Approx(0.5));
  CHECK(d.lambda[1] == doctest::Approx(0.5));
  CHECK(d.conditionals[0][0] == doctest::Approx(0.4));
  CHECK(d.conditionals[0][1] == doctest::Approx(0.6));
  Vec back = lambda_recombine(d, a);
  CHECK(l1_dist(back, p) < 1e-12);

  Vec edge = {0.0, 0.0, 1.0};
  LambdaDecomposition de = lambda_decompose(edge, a);
  CHECK(de.lambda[0] == doctest::Approx(0.0));
  // Vanished class falls back to its invariant measure.
  CHECK(de.conditionals[0][0] == doctest::Approx(0.5));
  CHECK(de.conditionals[0][1] == doctest::Approx(0.5));
}

TEST_CASE("s_value bounds and monotonicity") {
  ChainAnalysis a = analyze_chain(two_class_chain());
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Vec p = random_belief(rng, 3);
    Vec p2 = random_belief(rng, 3);
    double s = s_value(p, p2, a);
    double d = l1_dist(p, p2);
    CHECK(s >= d - 1e-12);
    CHECK(s <= 3.0 * d + 1e-12);
    Vec pm = vec_mat(p, a.matrix);
    Vec p2m = vec_mat(p2, a.matrix);
    CHECK(s_value(pm, p2m, a) <= s + 1e-12);
  }
}

TEST_CASE("s_value equals L1 on a common fiber image") {
  ChainAnalysis a = analyze_chain(two_class_chain());
  // Same class masses: the lambda term vanishes, leaving the weighted
  // conditional distance; after projecting by B both sides coincide.
  Vec p = {0.1, 0.4, 0.5};
  Vec p2 = {0.3, 0.2, 0.5};
  double s = s_value(p, p2, a);
  CHECK(s == doctest::Approx(0.5 * l1_dist(Vec{0.2, 0.8}, Vec{0.6, 0.4})));
  Vec pb = vec_mat(p, a.limit_matrix);
  Vec p2b = vec_mat(p2, a.limit_matrix);
  CHECK(l1_dist(pb, p2b) < 1e-12);
  CHECK(s_value(pb, p2b, a) < 1e-12);
}

TEST_CASE("s_value rejects transient mass") {
  StochasticMatrix m(from_rows(
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.5, 0.25, 0.25}}));
  ChainAnalysis a = analyze_chain(m, true);
  CHECK_THROWS_AS(lambda_decompose(Vec{0.2, 0.2, 0.6}, a), Error);
}

TEST_CASE("fiber grid stays on the fiber") {
  ChainAnalysis a = analyze_chain(two_class_chain());
  Vec masses = {0.25, 0.75};
  auto grid = fiber_grid(masses, 4, a);
  CHECK(grid.size() == 5);  // one class is a singleton
  for (const Vec& p : grid) {
    Vec lam = class_masses(p, a);
    CHECK(l1_dist(lam, masses) < 1e-12);
  }
}

TEST_CASE("identity chain splits into singleton classes") {
  ChainAnalysis a = analyze_chain(StochasticMatrix::identity(3));
  CHECK(a.num_classes() == 3);
  CHECK(a.period == 1);
  Vec p = {0.2, 0.3, 0.5};
  CHECK(l1_dist(class_masses(p, a), p) < 1e-15);
  // Every belief is invariant: S reduces to the L1 distance.
  Vec p2 = {0.5, 0.1, 0.4};
  CHECK(s_value(p, p2, a) == doctest::Approx(l1_dist(p, p2)));
}

TEST_SUITE_END();

}  // namespace
}  // namespace mcgs
