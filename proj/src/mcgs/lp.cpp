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

#include "mcgs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcgs {
namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;
constexpr double kFeasEps = 1e-7;
constexpr long kMaxIters = 200000;

// Full-tableau simplex over [real | slack | artificial | rhs] columns.
class Tableau {
 public:
  Tableau(int m, int cols) : m_(m), cols_(cols), t_(m, cols) {}

  double& at(int r, int c) { return t_.at(r, c); }
  double at(int r, int c) const { return t_.at(r, c); }
  int rhs_col() const { return cols_ - 1; }

  void pivot(int prow, int pcol) {
    double inv = 1.0 / t_.at(prow, pcol);
    double* prowp = t_.row(prow);
    for (int c = 0; c < cols_; ++c) prowp[c] *= inv;
    prowp[pcol] = 1.0;
    for (int r = 0; r < m_; ++r) {
      if (r == prow) continue;
      double f = t_.at(r, pcol);
      if (f == 0.0) continue;
      double* rp = t_.row(r);
      for (int c = 0; c < cols_; ++c) rp[c] -= f * prowp[c];
      rp[pcol] = 0.0;
    }
  }

  void eliminate_from_obj(Vec& obj, double& objval, int prow, int pcol) const {
    double f = obj[pcol];
    if (f == 0.0) return;
    const double* prowp = t_.row(prow);
    for (int c = 0; c < cols_ - 1; ++c) obj[c] -= f * prowp[c];
    obj[pcol] = 0.0;
    objval -= f * prowp[cols_ - 1];
  }

 private:
  int m_, cols_;
  Matrix t_;
};

struct Simplex {
  int m, n_real, n_slack, n_art, ncols;
  Tableau tab;
  std::vector<int> basis;          // row -> column
  std::vector<char> eligible;      // column may enter
  Vec obj;                         // reduced costs, excludes rhs column
  double objval = 0.0;             // current objective (phase cost of basis)
  bool bland = false;
  long stall = 0;
  double best_seen = -std::numeric_limits<double>::infinity();

  Simplex(int m_, int nr, int ns, int na)
      : m(m_), n_real(nr), n_slack(ns), n_art(na),
        ncols(nr + ns + na + 1), tab(m_, nr + ns + na + 1), basis(m_, -1),
        eligible(nr + ns + na, 1), obj(nr + ns + na, 0.0) {}

  // Returns kOptimal / kUnbounded / kFailure for the current objective.
  LpStatus run() {
    for (long iter = 0; iter < kMaxIters; ++iter) {
      int enter = -1;
      if (bland) {
        for (int c = 0; c < ncols - 1; ++c) {
          if (eligible[c] && obj[c] < -kCostEps) {
            enter = c;
            break;
          }
        }
      } else {
        double best = -kCostEps;
        for (int c = 0; c < ncols - 1; ++c) {
          if (eligible[c] && obj[c] < best) {
            best = obj[c];
            enter = c;
          }
        }
      }
      if (enter < 0) return LpStatus::kOptimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        double a = tab.at(r, enter);
        if (a <= kPivotEps) continue;
        double ratio = tab.at(r, tab.rhs_col()) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 && leave >= 0 &&
             basis[r] < basis[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;

      tab.pivot(leave, enter);
      tab.eliminate_from_obj(obj, objval, leave, enter);
      basis[leave] = enter;

      // objval tracks the negated cost, so progress pushes it upward.
      if (objval > best_seen + 1e-12) {
        best_seen = objval;
        stall = 0;
      } else if (++stall > 3L * (m + ncols) + 20) {
        bland = true;  // degeneracy stall: switch to cycling-proof pricing
      }
    }
    return LpStatus::kFailure;
  }

  // Recomputes reduced costs for cost vector c (length ncols-1).
  void load_objective(const Vec& cost) {
    obj = cost;
    objval = 0.0;
    for (int r = 0; r < m; ++r) {
      double cb = cost[basis[r]];
      if (cb == 0.0) continue;
      const double rhs = tab.at(r, tab.rhs_col());
      for (int c = 0; c < ncols - 1; ++c) obj[c] -= cb * tab.at(r, c);
      objval -= cb * rhs;
      obj[basis[r]] = 0.0;
    }
  }
};

}  // namespace

LpResult lp_solve(const LpProblem& problem) {
  LpResult res;
  int n = problem.n;
  int me = problem.a_eq.rows();
  int mu = problem.a_ub.rows();
  int m = me + mu;
  if (static_cast<int>(problem.c.size()) != n ||
      (me > 0 && problem.a_eq.cols() != n) ||
      (mu > 0 && problem.a_ub.cols() != n) ||
      static_cast<int>(problem.b_eq.size()) != me ||
      static_cast<int>(problem.b_ub.size()) != mu) {
    fail(ErrorCode::kBadArgument, "lp_solve: inconsistent problem shapes");
  }

  // Row layout: equalities first, then inequalities. Rows are sign-flipped
  // to make every right-hand side nonnegative; inequality slacks then carry
  // the flip sign, and rows without a +1 unit column get an artificial.
  std::vector<double> sign(m, 1.0);
  std::vector<int> art_of_row(m, -1);
  int n_art = 0;
  for (int r = 0; r < m; ++r) {
    double b = r < me ? problem.b_eq[r] : problem.b_ub[r - me];
    if (b < 0.0) sign[r] = -1.0;
    bool slack_usable = r >= me && sign[r] > 0.0;
    if (!slack_usable) art_of_row[r] = n_art++;
  }

  Simplex sx(m, n, mu, n_art);
  int slack0 = n, art0 = n + mu, rhs = sx.tab.rhs_col();
  for (int r = 0; r < m; ++r) {
    double b;
    if (r < me) {
      b = problem.b_eq[r];
      for (int c = 0; c < n; ++c) sx.tab.at(r, c) = sign[r] * problem.a_eq.at(r, c);
    } else {
      b = problem.b_ub[r - me];
      for (int c = 0; c < n; ++c) sx.tab.at(r, c) = sign[r] * problem.a_ub.at(r - me, c);
      sx.tab.at(r, slack0 + (r - me)) = sign[r];
    }
    sx.tab.at(r, rhs) = sign[r] * b;
    if (art_of_row[r] >= 0) {
      sx.tab.at(r, art0 + art_of_row[r]) = 1.0;
      sx.basis[r] = art0 + art_of_row[r];
    } else {
      sx.basis[r] = slack0 + (r - me);
    }
  }

  double scale = 1.0;
  for (int r = 0; r < m; ++r) scale = std::max(scale, std::fabs(sx.tab.at(r, rhs)));

  if (n_art > 0) {
    Vec phase1(sx.ncols - 1, 0.0);
    for (int a = 0; a < n_art; ++a) phase1[art0 + a] = 1.0;
    sx.load_objective(phase1);
    LpStatus st = sx.run();
    if (st == LpStatus::kFailure) {
      res.status = LpStatus::kFailure;
      return res;
    }
    if (-sx.objval > kFeasEps * scale) {  // objval holds -(phase cost)
      res.status = LpStatus::kInfeasible;
      return res;
    }
    for (int a = 0; a < n_art; ++a) sx.eligible[art0 + a] = 0;
  }

  Vec cost(sx.ncols - 1, 0.0);
  for (int c = 0; c < n; ++c) {
    cost[c] = problem.maximize ? -problem.c[c] : problem.c[c];
  }
  sx.load_objective(cost);
  sx.bland = false;
  sx.stall = 0;
  sx.best_seen = -std::numeric_limits<double>::infinity();
  LpStatus st = sx.run();
  if (st != LpStatus::kOptimal) {
    res.status = st;
    return res;
  }

  res.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (sx.basis[r] < n) {
      res.x[sx.basis[r]] = std::max(0.0, sx.tab.at(r, rhs));
    }
  }
  res.value = dot(problem.c, res.x);

  // Reduced cost of the unit column of row r is -y_r for the internal
  // minimization; undo the row flip and the max/min flip.
  Vec y(m, 0.0);
  for (int r = 0; r < m; ++r) {
    int unit_col = art_of_row[r] >= 0 ? art0 + art_of_row[r] : slack0 + (r - me);
    y[r] = -sx.obj[unit_col] * sign[r];
    if (problem.maximize) y[r] = -y[r];
  }
  res.dual_eq.assign(y.begin(), y.begin() + me);
  res.dual_ub.assign(y.begin() + me, y.end());
  res.status = LpStatus::kOptimal;
  return res;
}

}  // namespace mcgs
