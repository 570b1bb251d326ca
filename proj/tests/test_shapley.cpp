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
#include "mcgs/shapley.hpp"

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

// 2x2x2x2 game with the given chains and a seeded payoff tensor.
GameSpec random_game(uint64_t seed, StochasticMatrix mk, StochasticMatrix ml,
                     Vec p0 = {0.5, 0.5}, Vec q0 = {0.5, 0.5}) {
  Rng rng(seed);
  std::vector<double> payoff(16);
  for (double& g : payoff) g = rng.uniform_in(-1.0, 1.0);
  return GameSpec::create({"k0", "k1"}, {"l0", "l1"}, {"a", "b"}, {"c", "d"},
                          payoff, std::move(mk), std::move(ml), std::move(p0),
                          std::move(q0));
}

StochasticMatrix mixing_chain(double a, double b) {
  return StochasticMatrix(from_rows({{1.0 - a, a}, {b, 1.0 - b}}));
}

// One-shot value oracle: with a single stage, optimizing a behavioral
// action per state is the matrix game over pure state-to-action maps.
double one_shot_oracle(const GameSpec& spec, const Vec& p, const Vec& q) {
  const int kk = spec.K(), ll = spec.L(), ii = spec.I(), jj = spec.J();
  int na = 1, nb = 1;
  for (int k = 0; k < kk; ++k) na *= ii;
  for (int l = 0; l < ll; ++l) nb *= jj;
  Matrix m(na, nb);
  for (int a = 0; a < na; ++a) {
    for (int b = 0; b < nb; ++b) {
      double v = 0.0;
      for (int k = 0; k < kk; ++k) {
        int i = (a / static_cast<int>(std::pow(ii, k))) % ii;
        for (int l = 0; l < ll; ++l) {
          int j = (b / static_cast<int>(std::pow(jj, l))) % jj;
          v += p[k] * q[l] * spec.g(k, l, i, j);
        }
      }
      m.at(a, b) = v;
    }
  }
  return solve_matrix_game(m).value;
}

TEST_SUITE_BEGIN("shapley");

TEST_CASE("single-stage value matches the pure-map matrix game") {
  for (uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
    GameSpec spec = random_game(seed, mixing_chain(0.3, 0.4),
                                mixing_chain(0.25, 0.5));
    DomainSet xd = unconstrained_domains(spec.K(), spec.I());
    DomainSet yd = unconstrained_domains(spec.L(), spec.J());
    SaddleOptions opt;
    Rng rng(seed + 100);
    for (int trial = 0; trial < 4; ++trial) {
      double a = rng.uniform(), b = rng.uniform();
      Vec p = {a, 1.0 - a}, q = {b, 1.0 - b};
      SaddleResult r = solve_stage_game(spec, p, q, 1.0, nullptr, *xd.shared,
                                        *yd.shared, opt);
      CHECK(r.tolerance_reached);
      CHECK(r.value ==
            doctest::Approx(one_shot_oracle(spec, p, q)).epsilon(1e-8));
    }
  }
}

TEST_CASE("memoryless chains decouple the two-stage value") {
  // Both chains mix to (1/2, 1/2) in one step regardless of the start, so
  // every stage-two posterior collapses and
  //   v_2(p, q) = v_1(p, q) / 2 + v_1(u, u) / 2 with u uniform.
  StochasticMatrix iid(from_rows({{0.5, 0.5}, {0.5, 0.5}}));
  GameSpec spec = random_game(77, iid, iid);
  std::vector<ValueTable> tables = compute_v(spec, 2, 4, 1e-7);
  const ValueTable& v1 = tables[0];
  const ValueTable& v2 = tables[1];
  Vec u = {0.5, 0.5};
  double anchor = v1.eval(u, u);
  const PairGrid& grid = v1.grid();
  for (int pi = 0; pi < grid.p.size(); ++pi) {
    for (int qi = 0; qi < grid.q.size(); ++qi) {
      CHECK(v2.at(pi, qi) ==
            doctest::Approx(0.5 * v1.at(pi, qi) + 0.5 * anchor).epsilon(1e-6));
    }
  }
}

TEST_CASE("value tables stay within payoff bounds and certify gaps") {
  GameSpec spec = random_game(5, mixing_chain(0.2, 0.6),
                              mixing_chain(0.45, 0.35));
  std::vector<ValueTable> tables = compute_v(spec, 4, 4, 1e-5);
  REQUIRE(tables.size() == 4);
  for (const ValueTable& t : tables) {
    for (double v : t.values()) {
      CHECK(v <= 1.0 + 1e-9);
      CHECK(v >= -1.0 - 1e-9);
    }
    CHECK(t.solver_gap() >= 0.0);
    CHECK(t.solver_gap() < 0.05);
  }
}

TEST_CASE("successive horizons drift by at most 2/T plus certificates") {
  GameSpec spec = random_game(21, mixing_chain(0.5, 0.3),
                              mixing_chain(0.15, 0.7));
  std::vector<ValueTable> tables = compute_v(spec, 5, 4, 1e-5);
  for (size_t t = 1; t < tables.size(); ++t) {
    double horizon = static_cast<double>(t);  // tables[t-1] holds v_t
    double drift = ValueTable::sup_diff(tables[t], tables[t - 1]);
    double slack =
        tables[t].solver_gap() + tables[t - 1].solver_gap() + 1e-9;
    CHECK(drift <= 2.0 / horizon + slack);
  }
}

TEST_CASE("belief advance shifts the value by at most 4/T plus certificates") {
  GameSpec spec = random_game(33, mixing_chain(0.4, 0.2),
                              mixing_chain(0.3, 0.3));
  std::vector<ValueTable> tables = compute_v(spec, 5, 8, 1e-5);
  const Matrix& mk = spec.chain_k.matrix;
  const Matrix& ml = spec.chain_l.matrix;
  for (size_t t = 0; t < tables.size(); ++t) {
    const ValueTable& table = tables[t];
    double horizon = static_cast<double>(t + 1);
    const PairGrid& grid = table.grid();
    // Interpolating at the advanced beliefs costs at most the mesh times
    // the Lipschitz bound on top of the theoretical drift.
    double slack = 2.0 * table.solver_gap() + table.interp_error() + 1e-9;
    for (int pi = 0; pi < grid.p.size(); ++pi) {
      for (int qi = 0; qi < grid.q.size(); ++qi) {
        Vec pm = advance(grid.p.point(pi), mk);
        Vec qn = advance(grid.q.point(qi), ml);
        double shifted = table.eval(pm, qn);
        CHECK(std::fabs(shifted - table.at(pi, qi)) <=
              4.0 / horizon + slack);
      }
    }
  }
}

TEST_CASE("role transposition negates the value") {
  GameSpec spec = random_game(9, mixing_chain(0.35, 0.45),
                              mixing_chain(0.2, 0.55));
  GameSpec flipped = transpose_game(spec);
  std::vector<ValueTable> direct = compute_v(spec, 3, 4, 1e-6);
  std::vector<ValueTable> swapped = compute_v(flipped, 3, 4, 1e-6);
  for (size_t t = 0; t < direct.size(); ++t) {
    const PairGrid& grid = direct[t].grid();
    double tol =
        direct[t].solver_gap() + swapped[t].solver_gap() + 1e-8;
    for (int pi = 0; pi < grid.p.size(); ++pi) {
      for (int qi = 0; qi < grid.q.size(); ++qi) {
        CHECK(std::fabs(direct[t].at(pi, qi) + swapped[t].at(qi, pi)) <= tol);
      }
    }
  }
}

TEST_CASE("recursion is deterministic") {
  GameSpec spec = random_game(42, mixing_chain(0.3, 0.3),
                              mixing_chain(0.4, 0.1));
  std::vector<ValueTable> a = compute_v(spec, 3, 4, 1e-5);
  std::vector<ValueTable> b = compute_v(spec, 3, 4, 1e-5);
  for (size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].values() == b[t].values());
    CHECK(a[t].solver_gap() == b[t].solver_gap());
  }
}

TEST_SUITE_END();

}  // namespace
}  // namespace mcgs
