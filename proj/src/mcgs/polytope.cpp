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

#include "mcgs/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mcgs/lp.hpp"

namespace mcgs {
namespace {

constexpr int kMaxEnumDim = 24;
constexpr double kVertexEps = 1e-9;

// Equality system rows for the polytope in standard form, slacks included.
struct StandardForm {
  Matrix a;  // m x nvars
  Vec b;
  int nx;      // original variables
  int nvars;   // with slacks
};

StandardForm standard_form(const Polytope& poly) {
  int nx = poly.dim();
  int nb = static_cast<int>(poly.blocks.size());
  int ne = poly.extra_eq.rows();
  int nu = poly.extra_ub.rows();
  StandardForm sf;
  sf.nx = nx;
  sf.nvars = nx + nu;
  sf.a = Matrix(nb + ne + nu, sf.nvars);
  sf.b.assign(nb + ne + nu, 0.0);
  int off = 0;
  for (int bi = 0; bi < nb; ++bi) {
    for (int k = 0; k < poly.blocks[bi]; ++k) sf.a.at(bi, off + k) = 1.0;
    sf.b[bi] = 1.0;
    off += poly.blocks[bi];
  }
  for (int r = 0; r < ne; ++r) {
    for (int c = 0; c < nx; ++c) sf.a.at(nb + r, c) = poly.extra_eq.at(r, c);
    sf.b[nb + r] = poly.extra_b[r];
  }
  for (int r = 0; r < nu; ++r) {
    for (int c = 0; c < nx; ++c) {
      sf.a.at(nb + ne + r, c) = poly.extra_ub.at(r, c);
    }
    sf.a.at(nb + ne + r, nx + r) = 1.0;
    sf.b[nb + ne + r] = poly.extra_ub_b[r];
  }
  return sf;
}

// Row echelon reduction of [A|b]; returns pivot columns (the rank).
int row_reduce(Matrix& a, Vec& b, std::vector<int>* pivot_rows_out) {
  int m = a.rows(), n = a.cols();
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int piv = -1;
    double best = 1e-11;
    for (int r = rank; r < m; ++r) {
      if (std::fabs(a.at(r, col)) > best) {
        best = std::fabs(a.at(r, col));
        piv = r;
      }
    }
    if (piv < 0) continue;
    if (piv != rank) {
      for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(rank, j));
      std::swap(b[piv], b[rank]);
    }
    double inv = 1.0 / a.at(rank, col);
    for (int j = 0; j < n; ++j) a.at(rank, j) *= inv;
    b[rank] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == rank) continue;
      double f = a.at(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) a.at(r, j) -= f * a.at(rank, j);
      b[r] -= f * b[rank];
    }
    if (pivot_rows_out) pivot_rows_out->push_back(col);
    ++rank;
  }
  return rank;
}

}  // namespace

Polytope Polytope::product_simplex(const std::vector<int>& blocks) {
  Polytope p;
  p.blocks = blocks;
  return p;
}

std::vector<Vec> polytope_vertices(const Polytope& poly) {
  StandardForm sf = standard_form(poly);
  if (sf.nvars > kMaxEnumDim) {
    fail(ErrorCode::kBadArgument,
         "vertex enumeration over " + std::to_string(sf.nvars) +
             " variables exceeds the supported size");
  }
  // Drop dependent rows first so bases have full size `rank`.
  Matrix red = sf.a;
  Vec redb = sf.b;
  int rank = row_reduce(red, redb, nullptr);
  // Inconsistent system: a zero row with nonzero rhs.
  for (int r = rank; r < red.rows(); ++r) {
    if (std::fabs(redb[r]) > 1e-9) return {};
  }
  Matrix base(rank, sf.nvars);
  Vec baseb(rank);
  for (int r = 0; r < rank; ++r) {
    for (int c = 0; c < sf.nvars; ++c) base.at(r, c) = red.at(r, c);
    baseb[r] = redb[r];
  }

  std::vector<Vec> found;
  std::map<std::vector<long long>, bool> seen;
  std::vector<int> cols(rank);
  // Enumerate column subsets as candidate bases.
  auto visit = [&](const std::vector<int>& subset) {
    Matrix sub(rank, rank);
    for (int r = 0; r < rank; ++r) {
      for (int c = 0; c < rank; ++c) sub.at(r, c) = base.at(r, subset[c]);
    }
    Vec rhs = baseb;
    // Solve sub * xs = rhs by elimination; bail on singularity.
    Matrix a = sub;
    Vec b = rhs;
    int got = row_reduce(a, b, nullptr);
    if (got < rank) return;
    Vec xs(rank);
    for (int r = 0; r < rank; ++r) xs[r] = b[r];
    Vec x(sf.nvars, 0.0);
    for (int c = 0; c < rank; ++c) {
      if (xs[c] < -kVertexEps) return;
      x[subset[c]] = std::max(0.0, xs[c]);
    }
    // Confirm against the full system (guards ill-conditioned bases).
    for (int r = 0; r < base.rows(); ++r) {
      double s = 0.0;
      for (int c = 0; c < sf.nvars; ++c) s += base.at(r, c) * x[c];
      if (std::fabs(s - baseb[r]) > 1e-7) return;
    }
    std::vector<long long> rounded(sf.nx);
    for (int c = 0; c < sf.nx; ++c) {
      rounded[c] = llround(x[c] / kVertexEps);
    }
    if (seen.emplace(std::move(rounded), true).second) {
      found.emplace_back(x.begin(), x.begin() + sf.nx);
    }
  };
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == rank) {
      visit(cols);
      return;
    }
    for (int c = start; c <= sf.nvars - (rank - depth); ++c) {
      cols[depth] = c;
      self(self, c + 1, depth + 1);
    }
  };
  if (rank > 0) rec(rec, 0, 0);
  std::sort(found.begin(), found.end());
  return found;
}

bool polytope_contains(const Polytope& poly, const Vec& x, double tol) {
  if (static_cast<int>(x.size()) != poly.dim()) return false;
  for (double v : x) {
    if (v < -tol) return false;
  }
  int off = 0;
  for (int b : poly.blocks) {
    double s = 0.0;
    for (int k = 0; k < b; ++k) s += x[off + k];
    if (std::fabs(s - 1.0) > tol) return false;
    off += b;
  }
  for (int r = 0; r < poly.extra_eq.rows(); ++r) {
    double s = 0.0;
    for (int c = 0; c < poly.dim(); ++c) s += poly.extra_eq.at(r, c) * x[c];
    if (std::fabs(s - poly.extra_b[r]) > tol) return false;
  }
  for (int r = 0; r < poly.extra_ub.rows(); ++r) {
    double s = 0.0;
    for (int c = 0; c < poly.dim(); ++c) s += poly.extra_ub.at(r, c) * x[c];
    if (s > poly.extra_ub_b[r] + tol) return false;
  }
  return true;
}

Vec polytope_feasible_point(const Polytope& poly) {
  StandardForm sf = standard_form(poly);
  LpProblem lp;
  lp.n = sf.nvars;
  lp.c.assign(sf.nvars, 0.0);
  lp.a_eq = sf.a;
  lp.b_eq = sf.b;
  LpResult res = lp_solve(lp);
  if (res.status == LpStatus::kInfeasible) {
    fail(ErrorCode::kInfeasible, "polytope is empty");
  }
  if (res.status != LpStatus::kOptimal) {
    fail(ErrorCode::kLpFailure, "feasibility solve failed");
  }
  return Vec(res.x.begin(), res.x.begin() + poly.dim());
}

std::vector<Vec> polytope_grid(const Polytope& poly, int resolution,
                               const std::vector<Vec>& vertices) {
  const std::vector<Vec>& verts =
      vertices.empty() ? polytope_vertices(poly) : vertices;
  if (verts.empty()) return {};
  int nv = static_cast<int>(verts.size());
  int nx = static_cast<int>(verts[0].size());
  std::vector<Vec> out;
  std::map<std::vector<long long>, bool> seen;
  std::vector<int> weights(nv, 0);
  auto emit = [&]() {
    Vec x(nx, 0.0);
    for (int v = 0; v < nv; ++v) {
      if (weights[v] == 0) continue;
      double w = static_cast<double>(weights[v]) / resolution;
      for (int c = 0; c < nx; ++c) x[c] += w * verts[v][c];
    }
    std::vector<long long> rounded(nx);
    for (int c = 0; c < nx; ++c) rounded[c] = llround(x[c] / kVertexEps);
    if (seen.emplace(std::move(rounded), true).second) {
      out.push_back(std::move(x));
    }
  };
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == nv - 1) {
      weights[pos] = left;
      emit();
      return;
    }
    for (int w = 0; w <= left; ++w) {
      weights[pos] = w;
      self(self, pos + 1, left - w);
    }
  };
  rec(rec, 0, resolution);
  return out;
}

}  // namespace mcgs
