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

#ifndef MCGS_SHAPLEY_HPP_
#define MCGS_SHAPLEY_HPP_

#include <memory>
#include <vector>

#include "mcgs/game.hpp"
#include "mcgs/saddle.hpp"
#include "mcgs/simplex_grid.hpp"

namespace mcgs {

// Stage objective of the recursive value operator at beliefs (p, q):
//   phi(x, y) = alpha * G(p,q,x,y)
//             + (1-alpha) * sum_{i,j} xbar(i) ybar(j) f(p_post(i) M, q_post(j) N)
// where xbar, ybar are action marginals and p_post, q_post the Bayesian
// updates. Bilinear interpolation of f factorizes the continuation term,
// which keeps whole-grid pair matrices cheap.
class ShapleyObjective : public SaddleObjective {
 public:
  ShapleyObjective(const GameSpec& spec, const Vec& p, const Vec& q,
                   double alpha, const ValueTable* continuation);

  double eval(const Vec& x, const Vec& y) const override;
  void prepare_x(const std::vector<Vec>& xs) override;
  void prepare_y(const std::vector<Vec>& ys) override;
  void pair_matrix(Matrix& out) const override;
  Vec row_values(const Vec& x) const override;
  Vec col_values(const Vec& y) const override;

 private:
  struct XData {
    Vec z;  // x^T Gtilde over (l,j)
    Vec w;  // continuation row against the q-grid
  };
  struct YData {
    Vec yflat;
    std::vector<std::pair<int, double>> vbar;  // sparse q-grid weights
  };
  XData make_x(const Vec& x) const;
  YData make_y(const Vec& y) const;
  double combine(const XData& xd, const YData& yd) const;

  const GameSpec& spec_;
  Vec p_, q_;
  double alpha_;
  const ValueTable* cont_;
  Matrix gtilde_;  // (K*I) x (L*J), entries p^k q^l g(k,l,i,j)
  std::vector<XData> xdata_;
  std::vector<YData> ydata_;
};

// Saddle solve of the stage objective on the given domains.
SaddleResult solve_stage_game(const GameSpec& spec, const Vec& p, const Vec& q,
                              double alpha, const ValueTable* continuation,
                              const SaddleDomain& xdom,
                              const SaddleDomain& ydom,
                              const SaddleOptions& options);

// Action domains for the whole belief grid: one shared set or one per grid
// point of the matching side.
struct DomainSet {
  SaddleDomainPtr shared;
  std::vector<SaddleDomainPtr> per_point;

  const SaddleDomain& at(int index) const {
    return shared ? *shared : *per_point[index];
  }
};

DomainSet unconstrained_domains(int states, int actions);

// One application of the recursive operator to table f, stage weight alpha.
// The result's solver gap accumulates the per-point certificate on top of
// what f already carried, discounted by the continuation weight.
ValueTable shapley_step(const GameSpec& spec, const ValueTable& f,
                        double alpha, const DomainSet& xdoms,
                        const DomainSet& ydoms, const SaddleOptions& options);

// v_1..v_T by backward recursion on the shared grid; v_{t+1} applies the
// operator with alpha = 1/(t+1) to v_t. Lipschitz tag applied to every
// table. Same machinery serves the unconstrained and constrained values;
// per-point domain sets must be indexed like the grid sides.
std::vector<ValueTable> compute_value_tables(
    const GameSpec& spec, int horizon, PairGridPtr grid,
    const DomainSet& xdoms, const DomainSet& ydoms,
    const SaddleOptions& options, double lipschitz);

// Unconstrained finite-horizon values v_1..v_T at the given grid
// resolution; tol is the per-stage saddle tolerance.
std::vector<ValueTable> compute_v(const GameSpec& spec, int horizon,
                                  int resolution, double tol);

}  // namespace mcgs

#endif  // MCGS_SHAPLEY_HPP_
