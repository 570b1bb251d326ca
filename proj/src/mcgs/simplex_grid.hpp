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

#ifndef MCGS_SIMPLEX_GRID_HPP_
#define MCGS_SIMPLEX_GRID_HPP_

#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcgs/common.hpp"

namespace mcgs {

// Denominator-`resolution` rational points of the (dim-1)-simplex, in
// ascending lexicographic order of their integer compositions. Queries
// interpolate over the Kuhn triangulation of the grid: at most `dim`
// vertices with convex weights reproducing the query point exactly.
class SimplexGrid {
 public:
  SimplexGrid(int dim, int resolution);

  int dim() const { return dim_; }
  int resolution() const { return res_; }
  int size() const { return static_cast<int>(lattice_.size()); }
  Vec point(int index) const;
  const std::vector<int>& lattice(int index) const { return lattice_[index]; }
  int index_of(const std::vector<int>& lattice_point) const;

  // Barycentric weights of p in its Kuhn cell; weights below 1e-14 dropped.
  void interpolate(const Vec& p,
                   std::vector<std::pair<int, double>>& out) const;

  // Largest L1 diameter of an interpolation cell.
  double mesh() const;

 private:
  int dim_, res_;
  std::vector<std::vector<int>> lattice_;
  std::unordered_map<uint64_t, int> index_;

  uint64_t key(const std::vector<int>& c) const;
};

struct PairGrid {
  SimplexGrid p, q;

  PairGrid(SimplexGrid pg, SimplexGrid qg)
      : p(std::move(pg)), q(std::move(qg)) {}
  size_t size() const {
    return static_cast<size_t>(p.size()) * static_cast<size_t>(q.size());
  }
};

using PairGridPtr = std::shared_ptr<const PairGrid>;

PairGridPtr make_pair_grid(int dim_p, int dim_q, int resolution);

// A function of (p, q) stored at grid points, bilinear across the two Kuhn
// triangulations, tagged with a Lipschitz constant (L1 metric) and the
// worst solver gap incurred while filling it.
class ValueTable {
 public:
  ValueTable(PairGridPtr grid, double lipschitz, double init = 0.0);

  const PairGrid& grid() const { return *grid_; }
  PairGridPtr grid_ptr() const { return grid_; }
  double& at(int pi, int qi) {
    return v_[static_cast<size_t>(pi) * grid_->q.size() + qi];
  }
  double at(int pi, int qi) const {
    return v_[static_cast<size_t>(pi) * grid_->q.size() + qi];
  }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }

  double eval(const Vec& p, const Vec& q) const;
  // Interpolates in q only, at a p grid index.
  double eval_q(int pi, const Vec& q) const;

  double lipschitz() const { return lip_; }
  void set_lipschitz(double lip) { lip_ = lip; }
  double solver_gap() const { return gap_; }
  void set_solver_gap(double gap) { gap_ = gap; }
  // Certified interpolation error: lipschitz times the worst cell diameter.
  double interp_error() const;

  static double sup_diff(const ValueTable& a, const ValueTable& b);

 private:
  PairGridPtr grid_;
  std::vector<double> v_;
  double lip_;
  double gap_ = 0.0;
};

}  // namespace mcgs

#endif  // MCGS_SIMPLEX_GRID_HPP_
