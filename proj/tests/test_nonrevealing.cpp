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
#include <vector>

#include "doctest.h"
#include "mcgs/matrix_game.hpp"
#include "mcgs/nonrevealing.hpp"

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

StochasticMatrix mixing_chain(double a, double b) {
  return StochasticMatrix(from_rows({{1.0 - a, a}, {b, 1.0 - b}}));
}

std::vector<double> random_payoff(uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<double> payoff(count);
  for (double& g : payoff) g = rng.uniform_in(-1.0, 1.0);
  return payoff;
}

GameSpec small_game(uint64_t seed, StochasticMatrix mk, StochasticMatrix ml) {
  int kk = mk.size(), ll = ml.size();
  Vec p0(kk, 1.0 / kk), q0(ll, 1.0 / ll);
  std::vector<std::string> sk, sl;
  for (int k = 0; k < kk; ++k) sk.push_back("k" + std::to_string(k));
  for (int l = 0; l < ll; ++l) sl.push_back("l" + std::to_string(l));
  return GameSpec::create(sk, sl, {"a", "b"}, {"c", "d"},
                          random_payoff(seed, kk * ll * 4), std::move(mk),
                          std::move(ml), p0, q0);
}

TEST_SUITE_BEGIN("nonrevealing");

TEST_CASE("irreducible chain leaves the strategy set unconstrained") {
  ChainAnalysis a = analyze_chain(mixing_chain(0.3, 0.4));
  Polytope poly = nr_polytope({0.7, 0.3}, a, 2);
  CHECK(poly.extra_eq.rows() == 0);
  CHECK(polytope_vertices(poly).size() == 4);  // all pure maps survive
}

TEST_CASE("identity chain forces state-independent play") {
  ChainAnalysis a = analyze_chain(StochasticMatrix::identity(2));
  Polytope poly = nr_polytope({0.4, 0.6}, a, 2);
  std::vector<Vec> verts = polytope_vertices(poly);
  REQUIRE(verts.size() == 2);
  for (const Vec& v : verts) {
    CHECK(v[0] == doctest::Approx(v[2]).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(v[3]).epsilon(1e-12));
  }
}

TEST_CASE("mass on a single class is unconstrained") {
  ChainAnalysis a = analyze_chain(two_class_chain());
  Polytope poly = nr_polytope({0.5, 0.5, 0.0}, a, 2);
  CHECK(poly.extra_eq.rows() == 0);
  CHECK(polytope_vertices(poly).size() == 8);
}

TEST_CASE("posteriors under concealing strategies keep class masses") {
  ChainAnalysis a = analyze_chain(two_class_chain());
  Vec p = {0.3, 0.2, 0.5};
  Polytope poly = nr_polytope(p, a, 2);
  std::vector<Vec> verts = polytope_vertices(poly);
  CHECK(!verts.empty());
  Vec masses = class_masses(p, a);
  for (const Vec& v : verts) {
    BehavioralAction x = BehavioralAction::from_flat(v, 3, 2);
    for (int i = 0; i < 2; ++i) {
      Vec marginal = action_marginal(p, x);
      if (marginal[i] <= 1e-12) continue;
      Vec post = bayes_posterior(p, x, i);
      CHECK(l1_dist(class_masses(post, a), masses) <= 1e-9);
    }
  }
}

TEST_CASE("state-independent strategies always feasible") {
  ChainAnalysis a = analyze_chain(two_class_chain());
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    Vec p(3);
    double s = 0.0;
    for (double& v : p) {
      v = rng.uniform() + 1e-3;
      s += v;
    }
    for (double& v : p) v /= s;
    Polytope poly = nr_polytope(p, a, 2);
    double z = rng.uniform();
    Vec diag = {z, 1.0 - z, z, 1.0 - z, z, 1.0 - z};
    CHECK(polytope_contains(poly, diag));
  }
}

TEST_CASE("transient mass is rejected") {
  StochasticMatrix m(from_rows(
      {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {2.0 / 3, 1.0 / 3, 0.0}}));
  ChainAnalysis a = analyze_chain(m, true);
  CHECK_THROWS_AS(nr_polytope({0.0, 0.0, 1.0}, a, 2), Error);
}

TEST_CASE("irreducible chains give back the unconstrained values") {
  GameSpec spec = small_game(3, mixing_chain(0.3, 0.4),
                             mixing_chain(0.25, 0.5));
  std::vector<ValueTable> v = compute_v(spec, 3, 4, 1e-6);
  std::vector<ValueTable> vhat = compute_vhat(spec, 3, 4, 1e-6);
  for (size_t t = 0; t < v.size(); ++t) {
    double slack = v[t].solver_gap() + vhat[t].solver_gap() + 1e-9;
    CHECK(ValueTable::sup_diff(v[t], vhat[t]) <= slack);
  }
}

TEST_CASE("identity chains collapse one stage to the averaged game") {
  GameSpec spec = small_game(17, StochasticMatrix::identity(2),
                             StochasticMatrix::identity(2));
  std::vector<ValueTable> vhat = compute_vhat(spec, 1, 4, 1e-8);
  const PairGrid& grid = vhat[0].grid();
  for (int pi = 0; pi < grid.p.size(); ++pi) {
    Vec p = grid.p.point(pi);
    for (int qi = 0; qi < grid.q.size(); ++qi) {
      Vec q = grid.q.point(qi);
      Matrix avg(2, 2);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          double v = 0.0;
          for (int k = 0; k < 2; ++k) {
            for (int l = 0; l < 2; ++l) v += p[k] * q[l] * spec.g(k, l, i, j);
          }
          avg.at(i, j) = v;
        }
      }
      CHECK(vhat[0].at(pi, qi) ==
            doctest::Approx(solve_matrix_game(avg).value).epsilon(1e-7));
    }
  }
}

TEST_CASE("constant payoff concealed values are constant") {
  int kk = 3, ll = 2;
  std::vector<double> payoff(kk * ll * 4, 0.25);
  GameSpec spec = GameSpec::create(
      {"r", "s", "t"}, {"l0", "l1"}, {"a", "b"}, {"c", "d"}, payoff,
      two_class_chain(), mixing_chain(0.3, 0.4), {0.25, 0.25, 0.5},
      {0.5, 0.5});
  std::vector<ValueTable> vhat = compute_vhat(spec, 2, 3, 1e-8);
  for (const ValueTable& t : vhat) {
    for (double v : t.values()) CHECK(v == doctest::Approx(0.25));
  }
}

TEST_CASE("one-sided restrictions bracket the unconstrained value") {
  GameSpec spec = small_game(29, two_class_chain(), mixing_chain(0.35, 0.45));
  std::vector<ValueTable> v = compute_v(spec, 2, 3, 1e-6);
  std::vector<ValueTable> low =
      compute_constrained_values(spec, 2, 3, 1e-6, true, false);
  std::vector<ValueTable> high =
      compute_constrained_values(spec, 2, 3, 1e-6, false, true);
  for (size_t t = 0; t < v.size(); ++t) {
    double slack = v[t].solver_gap() + low[t].solver_gap() +
                   high[t].solver_gap() + 1e-9;
    const PairGrid& grid = v[t].grid();
    for (int pi = 0; pi < grid.p.size(); ++pi) {
      for (int qi = 0; qi < grid.q.size(); ++qi) {
        CHECK(low[t].at(pi, qi) <= v[t].at(pi, qi) + slack);
        CHECK(v[t].at(pi, qi) <= high[t].at(pi, qi) + slack);
      }
    }
  }
}

TEST_CASE("structural and plain Lipschitz bounds hold on samples") {
  GameSpec spec = small_game(41, two_class_chain(), mixing_chain(0.3, 0.4));
  std::vector<ValueTable> vhat = compute_vhat(spec, 2, 8, 1e-5);
  LipschitzReport rep =
      check_s_lipschitz(vhat, spec.chain_k, spec.chain_l, 200, 7);
  // Interpolation of the coarse table is the only source of slack.
  CHECK(rep.s_violation <= 0.1);
  CHECK(rep.l1_violation <= 0.1);
}

TEST_CASE("concealed values are concave along fibers") {
  GameSpec spec = small_game(53, two_class_chain(), mixing_chain(0.3, 0.4));
  std::vector<ValueTable> vhat = compute_vhat(spec, 2, 6, 1e-5);
  double violation =
      fiber_concavity_violation(vhat.back(), spec.chain_k, 3, 4);
  CHECK(violation <= 0.05);
}

TEST_CASE("doubling estimator converges on a constant game") {
  int kk = 3, ll = 2;
  std::vector<double> payoff(kk * ll * 4, -0.5);
  GameSpec spec = GameSpec::create(
      {"r", "s", "t"}, {"l0", "l1"}, {"a", "b"}, {"c", "d"}, payoff,
      two_class_chain(), mixing_chain(0.3, 0.4), {0.25, 0.25, 0.5},
      {0.5, 0.5});
  NrLimit limit = estimate_vhat_limit(spec, 3, 1e-6, 16, 1e-8);
  CHECK(limit.converged);
  CHECK(limit.horizon <= 4);
  CHECK(limit.increment <= 1e-6);
  CHECK(limit.balanced_residual <= 1e-9);
  for (double v : limit.reduced.values()) CHECK(v == doctest::Approx(-0.5));
  CHECK(nr_limit_eval(limit, spec, {0.2, 0.3, 0.5}, {0.6, 0.4}) ==
        doctest::Approx(-0.5));
}

TEST_CASE("irreducible chains reduce the limit to one number") {
  GameSpec spec = small_game(61, mixing_chain(0.4, 0.3),
                             mixing_chain(0.2, 0.6));
  NrLimit limit = estimate_vhat_limit(spec, 4, 0.02, 64, 1e-5);
  CHECK(limit.converged);
  CHECK(limit.reduced.values().size() == 1);
  // The concealed limit of an irreducible game is flat: the last table
  // should already be nearly constant across beliefs.
  double lo = 1e300, hi = -1e300;
  for (double v : limit.full.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo <= 3 * 0.02 + limit.full.solver_gap());
  CHECK(nr_limit_eval(limit, spec, {0.9, 0.1}, {0.3, 0.7}) ==
        doctest::Approx(limit.reduced.at(0, 0)));
}

TEST_SUITE_END();

}  // namespace
}  // namespace mcgs
