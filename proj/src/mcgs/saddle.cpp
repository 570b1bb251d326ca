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

#include "mcgs/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcgs/matrix_game.hpp"
#include "mcgs/simplex_grid.hpp"

namespace mcgs {

SaddleDomain SaddleDomain::product(const std::vector<int>& blocks) {
  SaddleDomain d;
  d.blocks_ = blocks;
  d.poly_ = Polytope::product_simplex(blocks);
  return d;
}

SaddleDomain SaddleDomain::from_polytope(Polytope poly) {
  SaddleDomain d;
  d.poly_ = std::move(poly);
  d.vertices_ = polytope_vertices(d.poly_);
  if (d.vertices_.empty()) {
    fail(ErrorCode::kInfeasible, "saddle domain is empty");
  }
  return d;
}

int SaddleDomain::dim() const { return poly_.dim(); }

const std::vector<Vec>& SaddleDomain::vertices() const {
  if (!blocks_.empty()) {
    fail(ErrorCode::kInternal, "product domains enumerate grids directly");
  }
  return vertices_;
}

double SaddleDomain::grid_size_estimate(int resolution) const {
  auto count = [](int slots, int res) {
    // C(res + slots - 1, slots - 1) computed in floating point.
    double v = 1.0;
    for (int i = 1; i <= slots - 1; ++i) {
      v *= static_cast<double>(res + i) / i;
    }
    return v;
  };
  if (!blocks_.empty()) {
    double total = 1.0;
    for (int b : blocks_) total *= count(b, resolution);
    return total;
  }
  return count(static_cast<int>(vertices_.size()), resolution);
}

const std::vector<Vec>& SaddleDomain::grid(int resolution) const {
  auto it = cache_.find(resolution);
  if (it != cache_.end()) return it->second;
  std::vector<Vec> pts;
  if (!blocks_.empty()) {
    std::vector<SimplexGrid> grids;
    grids.reserve(blocks_.size());
    for (int b : blocks_) grids.emplace_back(b, resolution);
    std::vector<int> idx(blocks_.size(), 0);
    while (true) {
      Vec x;
      x.reserve(dim());
      for (size_t t = 0; t < blocks_.size(); ++t) {
        Vec part = grids[t].point(idx[t]);
        x.insert(x.end(), part.begin(), part.end());
      }
      pts.push_back(std::move(x));
      size_t t = 0;
      while (t < blocks_.size() && ++idx[t] == grids[t].size()) {
        idx[t] = 0;
        ++t;
      }
      if (t == blocks_.size()) break;
    }
  } else {
    pts = polytope_grid(poly_, resolution, vertices_);
  }
  return cache_.emplace(resolution, std::move(pts)).first->second;
}

void SaddleObjective::pair_matrix(Matrix& out) const {
  int nr = static_cast<int>(xs_->size());
  int nc = static_cast<int>(ys_->size());
  out = Matrix(nr, nc);
  for (int a = 0; a < nr; ++a) {
    for (int b = 0; b < nc; ++b) out.at(a, b) = eval((*xs_)[a], (*ys_)[b]);
  }
}

Vec SaddleObjective::row_values(const Vec& x) const {
  Vec vals(ys_->size());
  for (size_t b = 0; b < ys_->size(); ++b) vals[b] = eval(x, (*ys_)[b]);
  return vals;
}

Vec SaddleObjective::col_values(const Vec& y) const {
  Vec vals(xs_->size());
  for (size_t a = 0; a < xs_->size(); ++a) vals[a] = eval((*xs_)[a], y);
  return vals;
}

namespace {

Vec mix_points(const std::vector<Vec>& pts, const Vec& weights) {
  Vec out(pts[0].size(), 0.0);
  for (size_t i = 0; i < pts.size(); ++i) {
    double w = weights[i];
    if (w <= 0.0) continue;
    for (size_t c = 0; c < out.size(); ++c) out[c] += w * pts[i][c];
  }
  return out;
}

}  // namespace

SaddleResult saddle_eval(SaddleObjective& objective, const SaddleDomain& x,
                         const SaddleDomain& y, const SaddleOptions& options) {
  SaddleResult best;
  best.gap = std::numeric_limits<double>::infinity();
  int mx = options.initial_resolution;
  int my = options.initial_resolution;
  Matrix a;
  while (true) {
    const auto& xs = x.grid(mx);
    const auto& ys = y.grid(my);
    objective.prepare_x(xs);
    objective.prepare_y(ys);
    objective.pair_matrix(a);
    MatrixGameSolution sol = solve_matrix_game(a);
    Vec xbar = mix_points(xs, sol.row_strategy);
    Vec ybar = mix_points(ys, sol.col_strategy);
    // Grid responses: what the y grid holds x-bar to, and the x grid
    // against y-bar. Their spread certifies the round.
    Vec against_x = objective.row_values(xbar);
    Vec against_y = objective.col_values(ybar);
    double y_response = *std::min_element(against_x.begin(), against_x.end());
    double x_response = *std::max_element(against_y.begin(), against_y.end());
    double gap = std::max(0.0, y_response - x_response);
    if (gap < best.gap) {
      best.value = sol.value;
      best.x = std::move(xbar);
      best.y = std::move(ybar);
      best.gap = gap;
      best.resolution_x = mx;
      best.resolution_y = my;
    }
    if (best.gap <= options.tol) {
      best.tolerance_reached = true;
      return best;
    }
    // Refine the side responsible for more of the spread.
    double x_defect = std::max(0.0, sol.value - x_response);
    double y_defect = std::max(0.0, y_response - sol.value);
    bool can_x = 2 * mx <= options.max_resolution &&
                 x.grid_size_estimate(2 * mx) <=
                     static_cast<double>(options.max_points_per_side);
    bool can_y = 2 * my <= options.max_resolution &&
                 y.grid_size_estimate(2 * my) <=
                     static_cast<double>(options.max_points_per_side);
    bool grow_x = false, grow_y = false;
    if (can_x && (!can_y || x_defect >= 0.75 * y_defect)) grow_x = true;
    if (can_y && (!can_x || y_defect >= 0.75 * x_defect)) grow_y = true;
    if (!grow_x && !grow_y) return best;  // tolerance not reached
    if (grow_x) mx *= 2;
    if (grow_y) my *= 2;
  }
}

}  // namespace mcgs
