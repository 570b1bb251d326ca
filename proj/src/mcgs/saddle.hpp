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

#ifndef MCGS_SADDLE_HPP_
#define MCGS_SADDLE_HPP_

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "mcgs/polytope.hpp"

namespace mcgs {

// One side's feasible set, with lazily cached discretizations. Either a
// product of simplices (grid = cartesian product of per-block grids) or a
// general polytope (grid = convex-weight mixtures of its vertices).
class SaddleDomain {
 public:
  static SaddleDomain product(const std::vector<int>& blocks);
  static SaddleDomain from_polytope(Polytope poly);

  int dim() const;
  const std::vector<Vec>& grid(int resolution) const;
  // Number of points grid(resolution) would hold (before deduplication).
  double grid_size_estimate(int resolution) const;
  const std::vector<Vec>& vertices() const;

 private:
  std::vector<int> blocks_;  // empty for polytope form
  Polytope poly_;
  std::vector<Vec> vertices_;
  mutable std::map<int, std::vector<Vec>> cache_;
};

using SaddleDomainPtr = std::shared_ptr<SaddleDomain>;

// Objective of a concave-convex saddle problem. The solver prepares point
// sets once per refinement round and then asks for the induced matrix and
// best-response rows, which lets implementations factor shared work.
class SaddleObjective {
 public:
  virtual ~SaddleObjective() = default;
  virtual double eval(const Vec& x, const Vec& y) const = 0;

  virtual void prepare_x(const std::vector<Vec>& xs) { xs_ = &xs; }
  virtual void prepare_y(const std::vector<Vec>& ys) { ys_ = &ys; }
  virtual void pair_matrix(Matrix& out) const;
  virtual Vec row_values(const Vec& x) const;  // against every prepared y
  virtual Vec col_values(const Vec& y) const;  // against every prepared x

 protected:
  const std::vector<Vec>* xs_ = nullptr;
  const std::vector<Vec>* ys_ = nullptr;
};

struct SaddleOptions {
  double tol = 1e-6;
  int max_points_per_side = 2500;
  int initial_resolution = 1;
  int max_resolution = 256;
};

struct SaddleResult {
  double value = 0.0;
  Vec x, y;            // mixtures of grid points, feasible in their domains
  double gap = 0.0;    // grid best-response spread of (x, y)
  bool tolerance_reached = false;
  int resolution_x = 0, resolution_y = 0;
};

// Discretized saddle solve: at each round the grid game is solved exactly;
// the certified gap is how much the y-grid response to x exceeds the x-grid
// response to y. Refinement doubles the side that contributes more to the
// gap and never worsens the reported result.
SaddleResult saddle_eval(SaddleObjective& objective, const SaddleDomain& x,
                         const SaddleDomain& y, const SaddleOptions& options);

// Convenience wrapper for callable objectives.
class FunctionObjective : public SaddleObjective {
 public:
  template <typename F>
  explicit FunctionObjective(F f) : f_(std::move(f)) {}
  double eval(const Vec& x, const Vec& y) const override { return f_(x, y); }

 private:
  std::function<double(const Vec&, const Vec&)> f_;
};

}  // namespace mcgs

#endif  // MCGS_SADDLE_HPP_
