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

#include "mcgs/chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace mcgs {
namespace {

constexpr double kMassEps = 1e-12;

// Gaussian elimination with partial pivoting; A is consumed.
Vec solve_linear(Matrix a, Vec b) {
  int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(a.at(r, col)) > std::fabs(a.at(piv, col))) piv = r;
    }
    if (std::fabs(a.at(piv, col)) < 1e-14) {
      fail(ErrorCode::kInternal, "singular linear system");
    }
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = a.at(r, col) / a.at(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
      b[r] -= f * b[col];
    }
  }
  Vec x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < n; ++j) s -= a.at(r, j) * x[j];
    x[r] = s / a.at(r, r);
  }
  return x;
}

// Tarjan over the digraph of strictly positive entries; components are
// emitted in reverse topological order.
struct SccFinder {
  const Matrix& m;
  int n;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<int> stack;
  int counter = 0, ncomp = 0;

  explicit SccFinder(const Matrix& mat)
      : m(mat), n(mat.rows()), index(n, -1), low(n, 0), comp(n, -1),
        on_stack(n, false) {}

  void dfs(int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w = 0; w < n; ++w) {
      if (m.at(v, w) <= 0.0) continue;
      if (index[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        int w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
        if (w == v) break;
      }
      ++ncomp;
    }
  }

  std::vector<std::vector<int>> run() {
    for (int v = 0; v < n; ++v) {
      if (index[v] < 0) dfs(v);
    }
    std::vector<std::vector<int>> groups(ncomp);
    for (int v = 0; v < n; ++v) groups[comp[v]].push_back(v);
    return groups;
  }
};

Vec invariant_of_class(const Matrix& m, const std::vector<int>& cls) {
  int c = static_cast<int>(cls.size());
  // pi * P = pi with sum(pi) = 1, written as (P^T - I) pi = 0 where the
  // first equation is replaced by the normalization row.
  Matrix a(c, c);
  Vec b(c, 0.0);
  for (int j = 0; j < c; ++j) a.at(0, j) = 1.0;
  b[0] = 1.0;
  for (int i = 1; i < c; ++i) {
    for (int j = 0; j < c; ++j) {
      a.at(i, j) = m.at(cls[j], cls[i]) - (i == j ? 1.0 : 0.0);
    }
  }
  Vec pi = solve_linear(std::move(a), std::move(b));
  double sum = 0.0;
  for (double& x : pi) {
    if (x < 0.0 && x > -1e-10) x = 0.0;
    if (x < 0.0) fail(ErrorCode::kInternal, "negative invariant measure");
    sum += x;
  }
  for (double& x : pi) x /= sum;
  return pi;
}

int class_period(const Matrix& m, const std::vector<int>& cls) {
  if (cls.size() == 1) return 1;
  int n = m.rows();
  std::vector<int> dist(n, -1);
  std::vector<bool> in_cls(n, false);
  for (int v : cls) in_cls[v] = true;
  std::deque<int> queue{cls[0]};
  dist[cls[0]] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w = 0; w < n; ++w) {
      if (m.at(v, w) <= 0.0 || !in_cls[w] || dist[w] >= 0) continue;
      dist[w] = dist[v] + 1;
      queue.push_back(w);
    }
  }
  int g = 0;
  for (int v : cls) {
    for (int w = 0; w < n; ++w) {
      if (m.at(v, w) <= 0.0 || !in_cls[w]) continue;
      g = std::gcd(g, dist[v] + 1 - dist[w]);
    }
  }
  return g == 0 ? 1 : std::abs(g);
}

}  // namespace

StochasticMatrix::StochasticMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    fail(ErrorCode::kNotStochastic, "transition matrix must be square");
  }
  for (int i = 0; i < m_.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < m_.cols(); ++j) {
      double x = m_.at(i, j);
      if (!(x >= 0.0) || x > 1.0 + 1e-12) {
        fail(ErrorCode::kNotStochastic,
             "transition entry out of range at (" + std::to_string(i) + "," +
                 std::to_string(j) + "): " + format_double(x));
      }
      sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      fail(ErrorCode::kNotStochastic,
           "row " + std::to_string(i) + " sums to " + format_double(sum));
    }
  }
}

StochasticMatrix StochasticMatrix::identity(int n) {
  return StochasticMatrix(Matrix::identity(n));
}

ChainAnalysis analyze_chain(const StochasticMatrix& m, bool allow_transient) {
  const Matrix& mat = m.mat();
  int n = m.size();
  ChainAnalysis a;
  a.matrix = mat;
  a.class_of.assign(n, -1);

  auto groups = SccFinder(mat).run();
  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    bool closed = true;
    std::vector<bool> inside(n, false);
    for (int v : g) inside[v] = true;
    for (int v : g) {
      for (int w = 0; w < n && closed; ++w) {
        if (mat.at(v, w) > 0.0 && !inside[w]) closed = false;
      }
    }
    if (closed) {
      int idx = static_cast<int>(a.classes.size());
      for (int v : g) a.class_of[v] = idx;
      a.classes.push_back(g);
    } else {
      for (int v : g) a.transient.push_back(v);
    }
  }
  std::sort(a.transient.begin(), a.transient.end());
  a.has_transient = !a.transient.empty();
  if (a.has_transient && !allow_transient) {
    std::string names;
    for (int v : a.transient) {
      if (!names.empty()) names += ",";
      names += std::to_string(v);
    }
    fail(ErrorCode::kTransientState, "chain has transient states {" + names +
                                         "}; every state must be recurrent");
  }

  // Classes come out of Tarjan in reverse topological order; re-sort them by
  // smallest member so the labeling is independent of traversal details.
  std::sort(a.classes.begin(), a.classes.end(),
            [](const auto& x, const auto& y) { return x[0] < y[0]; });
  for (size_t r = 0; r < a.classes.size(); ++r) {
    for (int v : a.classes[r]) a.class_of[v] = static_cast<int>(r);
  }

  int lcm = 1;
  for (const auto& cls : a.classes) {
    Vec pi_local = invariant_of_class(mat, cls);
    Vec pi(n, 0.0);
    for (size_t i = 0; i < cls.size(); ++i) pi[cls[i]] = pi_local[i];
    a.invariant_measures.push_back(std::move(pi));
    int p = class_period(mat, cls);
    a.class_periods.push_back(p);
    lcm = std::lcm(lcm, p);
  }
  a.period = lcm;

  // Limit matrix in the Cesaro sense: recurrent rows carry the invariant
  // measure of their class; transient rows mix them by absorption odds.
  a.limit_matrix = Matrix(n, n);
  for (int v = 0; v < n; ++v) {
    int r = a.class_of[v];
    if (r < 0) continue;
    for (int j = 0; j < n; ++j) a.limit_matrix.at(v, j) = a.invariant_measures[r][j];
  }
  if (a.has_transient) {
    int t = static_cast<int>(a.transient.size());
    int rc = a.num_classes();
    // (I - Q) X = R, Q the transient block, R the one-step mass into classes.
    Matrix iq(t, t);
    std::vector<Vec> rhs(rc, Vec(t, 0.0));
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < t; ++j) {
        iq.at(i, j) = (i == j ? 1.0 : 0.0) - mat.at(a.transient[i], a.transient[j]);
      }
      for (int w = 0; w < n; ++w) {
        int cw = a.class_of[w];
        if (cw >= 0) rhs[cw][i] += mat.at(a.transient[i], w);
      }
    }
    for (int r = 0; r < rc; ++r) {
      Vec absorb = solve_linear(iq, rhs[r]);
      for (int i = 0; i < t; ++i) {
        for (int j = 0; j < n; ++j) {
          a.limit_matrix.at(a.transient[i], j) +=
              absorb[i] * a.invariant_measures[r][j];
        }
      }
    }
  }
  return a;
}

StochasticMatrix aperiodic_lift(const ChainAnalysis& analysis) {
  return StochasticMatrix(mat_pow(analysis.matrix, analysis.period));
}

LambdaDecomposition lambda_decompose(const Vec& p, const ChainAnalysis& a) {
  if (static_cast<int>(p.size()) != a.size()) {
    fail(ErrorCode::kBadArgument, "belief length does not match chain");
  }
  for (int v : a.transient) {
    if (p[v] > kMassEps) {
      fail(ErrorCode::kPreconditionViolated,
           "belief puts mass " + format_double(p[v]) + " on transient state " +
               std::to_string(v));
    }
  }
  LambdaDecomposition d;
  d.lambda.assign(a.num_classes(), 0.0);
  for (int r = 0; r < a.num_classes(); ++r) {
    for (int v : a.classes[r]) d.lambda[r] += p[v];
  }
  for (int r = 0; r < a.num_classes(); ++r) {
    if (d.lambda[r] > kMassEps) {
      Vec cond(a.size(), 0.0);
      for (int v : a.classes[r]) cond[v] = p[v] / d.lambda[r];
      d.conditionals.push_back(std::move(cond));
    } else {
      d.conditionals.push_back(a.invariant_measures[r]);
    }
  }
  return d;
}

Vec lambda_recombine(const LambdaDecomposition& d, const ChainAnalysis& a) {
  Vec p(a.size(), 0.0);
  for (int r = 0; r < a.num_classes(); ++r) {
    for (int v : a.classes[r]) p[v] += d.lambda[r] * d.conditionals[r][v];
  }
  return p;
}

double s_value(const Vec& p, const Vec& p2, const ChainAnalysis& a) {
  LambdaDecomposition d1 = lambda_decompose(p, a);
  LambdaDecomposition d2 = lambda_decompose(p2, a);
  double s = l1_dist(d1.lambda, d2.lambda);
  for (int r = 0; r < a.num_classes(); ++r) {
    if (d1.lambda[r] > kMassEps && d2.lambda[r] > kMassEps) {
      s += d2.lambda[r] * l1_dist(d1.conditionals[r], d2.conditionals[r]);
    }
  }
  return s;
}

Vec lift_class_masses(const Vec& theta, const ChainAnalysis& a) {
  if (static_cast<int>(theta.size()) != a.num_classes()) {
    fail(ErrorCode::kBadArgument, "class mass vector length mismatch");
  }
  Vec p(a.size(), 0.0);
  for (int r = 0; r < a.num_classes(); ++r) {
    for (int v : a.classes[r]) p[v] += theta[r] * a.invariant_measures[r][v];
  }
  return p;
}

Vec class_masses(const Vec& p, const ChainAnalysis& a) {
  Vec theta(a.num_classes(), 0.0);
  for (int r = 0; r < a.num_classes(); ++r) {
    for (int v : a.classes[r]) theta[r] += p[v];
  }
  return theta;
}

namespace {

// Denominator-`res` compositions of res into `dim` parts, lexicographic.
void compositions(int dim, int res, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(dim, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == dim - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, res);
}

}  // namespace

std::vector<Vec> fiber_grid(const Vec& class_masses_in, int resolution,
                            const ChainAnalysis& a) {
  if (resolution < 1) fail(ErrorCode::kBadArgument, "resolution must be >= 1");
  if (static_cast<int>(class_masses_in.size()) != a.num_classes()) {
    fail(ErrorCode::kBadArgument, "class mass vector length mismatch");
  }
  std::vector<int> active;
  for (int r = 0; r < a.num_classes(); ++r) {
    if (class_masses_in[r] > kMassEps) active.push_back(r);
  }
  // Per active class, all denominator-`resolution` conditionals.
  std::vector<std::vector<std::vector<int>>> grids;
  for (int r : active) {
    std::vector<std::vector<int>> g;
    compositions(static_cast<int>(a.classes[r].size()), resolution, g);
    grids.push_back(std::move(g));
  }
  std::vector<Vec> out;
  std::vector<size_t> idx(active.size(), 0);
  while (true) {
    Vec p(a.size(), 0.0);
    for (size_t t = 0; t < active.size(); ++t) {
      int r = active[t];
      const auto& comp = grids[t][idx[t]];
      for (size_t i = 0; i < a.classes[r].size(); ++i) {
        p[a.classes[r][i]] =
            class_masses_in[r] * comp[i] / static_cast<double>(resolution);
      }
    }
    out.push_back(std::move(p));
    size_t t = 0;
    while (t < active.size() && ++idx[t] == grids[t].size()) {
      idx[t] = 0;
      ++t;
    }
    if (t == active.size()) break;
    if (active.empty()) break;
  }
  return out;
}

}  // namespace mcgs
