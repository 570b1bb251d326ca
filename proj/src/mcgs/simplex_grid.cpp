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

#include "mcgs/simplex_grid.hpp"

#include <algorithm>
#include <cmath>

namespace mcgs {

SimplexGrid::SimplexGrid(int dim, int resolution)
    : dim_(dim), res_(resolution) {
  if (dim < 1) fail(ErrorCode::kBadArgument, "simplex dimension must be >= 1");
  if (resolution < 1) fail(ErrorCode::kBadArgument, "resolution must be >= 1");
  std::vector<int> cur(dim, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == dim - 1) {
      cur[pos] = left;
      lattice_.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, resolution);
  index_.reserve(lattice_.size() * 2);
  for (size_t i = 0; i < lattice_.size(); ++i) {
    index_.emplace(key(lattice_[i]), static_cast<int>(i));
  }
}

uint64_t SimplexGrid::key(const std::vector<int>& c) const {
  uint64_t h = 1469598103934665603ull;
  for (int v : c) {
    h ^= static_cast<uint64_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

Vec SimplexGrid::point(int index) const {
  const auto& c = lattice_[index];
  Vec p(dim_);
  for (int i = 0; i < dim_; ++i) p[i] = static_cast<double>(c[i]) / res_;
  return p;
}

int SimplexGrid::index_of(const std::vector<int>& lattice_point) const {
  auto it = index_.find(key(lattice_point));
  if (it == index_.end()) {
    fail(ErrorCode::kBadArgument, "lattice point not on grid");
  }
  // Hash collisions are not assumed away: verify.
  if (lattice_[it->second] != lattice_point) {
    for (size_t i = 0; i < lattice_.size(); ++i) {
      if (lattice_[i] == lattice_point) return static_cast<int>(i);
    }
    fail(ErrorCode::kBadArgument, "lattice point not on grid");
  }
  return it->second;
}

void SimplexGrid::interpolate(const Vec& p,
                              std::vector<std::pair<int, double>>& out) const {
  out.clear();
  if (static_cast<int>(p.size()) != dim_) {
    fail(ErrorCode::kBadArgument, "interpolation point has wrong dimension");
  }
  if (dim_ == 1) {
    out.emplace_back(0, 1.0);
    return;
  }
  int d = dim_ - 1;
  // Cumulative coordinates map the simplex onto the monotone lattice cube;
  // the Kuhn cell of p is the base point plus unit steps in decreasing
  // order of the fractional parts (ties resolved toward the later
  // coordinate, which keeps every intermediate point monotone).
  std::vector<double> frac(d);
  std::vector<int> base(d);
  double acc = 0.0, prev = 0.0;
  for (int j = 0; j < d; ++j) {
    acc += p[j];
    double y = std::clamp(acc * res_, prev, static_cast<double>(res_));
    prev = y;
    double f = std::floor(y);
    base[j] = static_cast<int>(f);
    frac[j] = y - f;
  }
  std::vector<int> order(d);
  for (int j = 0; j < d; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (frac[a] != frac[b]) return frac[a] > frac[b];
    return a > b;
  });

  auto emit = [&](const std::vector<int>& cum, double w) {
    if (w <= 1e-14) return;
    std::vector<int> comp(dim_);
    comp[0] = cum[0];
    for (int j = 1; j < d; ++j) comp[j] = cum[j] - cum[j - 1];
    comp[d] = res_ - cum[d - 1];
    out.emplace_back(index_of(comp), w);
  };

  std::vector<int> cum = base;
  emit(cum, 1.0 - frac[order[0]]);
  for (int t = 0; t < d; ++t) {
    double r = frac[order[t]];
    if (r <= 1e-14) break;  // remaining vertices all carry zero weight
    cum[order[t]] += 1;
    double w = (t + 1 < d) ? r - frac[order[t + 1]] : r;
    emit(cum, w);
  }
  double total = 0.0;
  for (auto& [idx, w] : out) total += w;
  for (auto& [idx, w] : out) w /= total;
}

double SimplexGrid::mesh() const {
  if (dim_ == 1) return 0.0;
  // Worst L1 gap between two vertices of one Kuhn cell.
  return 2.0 * std::ceil((dim_ - 1) / 2.0) / res_;
}

PairGridPtr make_pair_grid(int dim_p, int dim_q, int resolution) {
  return std::make_shared<const PairGrid>(SimplexGrid(dim_p, resolution),
                                          SimplexGrid(dim_q, resolution));
}

ValueTable::ValueTable(PairGridPtr grid, double lipschitz, double init)
    : grid_(std::move(grid)), v_(grid_->size(), init), lip_(lipschitz) {}

double ValueTable::eval(const Vec& p, const Vec& q) const {
  std::vector<std::pair<int, double>> wp, wq;
  grid_->p.interpolate(p, wp);
  grid_->q.interpolate(q, wq);
  double s = 0.0;
  for (const auto& [pi, a] : wp) {
    double inner = 0.0;
    for (const auto& [qi, b] : wq) inner += b * at(pi, qi);
    s += a * inner;
  }
  return s;
}

double ValueTable::eval_q(int pi, const Vec& q) const {
  std::vector<std::pair<int, double>> wq;
  grid_->q.interpolate(q, wq);
  double s = 0.0;
  for (const auto& [qi, b] : wq) s += b * at(pi, qi);
  return s;
}

double ValueTable::interp_error() const {
  return lip_ * (grid_->p.mesh() + grid_->q.mesh()) / 2.0;
}

double ValueTable::sup_diff(const ValueTable& a, const ValueTable& b) {
  if (a.v_.size() != b.v_.size()) {
    fail(ErrorCode::kBadArgument, "tables on different grids");
  }
  double s = 0.0;
  for (size_t i = 0; i < a.v_.size(); ++i) {
    s = std::max(s, std::fabs(a.v_[i] - b.v_[i]));
  }
  return s;
}

}  // namespace mcgs
