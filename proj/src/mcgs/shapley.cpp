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

#include "mcgs/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mcgs {

namespace {
constexpr double kZeroMass = 1e-12;
}  // namespace

ShapleyObjective::ShapleyObjective(const GameSpec& spec, const Vec& p,
                                   const Vec& q, double alpha,
                                   const ValueTable* continuation)
    : spec_(spec), p_(p), q_(q), alpha_(alpha), cont_(continuation) {
  const int kk = spec.K(), ll = spec.L(), ii = spec.I(), jj = spec.J();
  gtilde_ = Matrix(kk * ii, ll * jj);
  for (int k = 0; k < kk; ++k) {
    for (int i = 0; i < ii; ++i) {
      double* row = gtilde_.row(k * ii + i);
      for (int l = 0; l < ll; ++l) {
        double pq = p_[k] * q_[l];
        for (int j = 0; j < jj; ++j) row[l * jj + j] = pq * spec.g(k, l, i, j);
      }
    }
  }
}

ShapleyObjective::XData ShapleyObjective::make_x(const Vec& x) const {
  const int kk = spec_.K(), ii = spec_.I();
  const int cols = gtilde_.cols();
  XData xd;
  xd.z.assign(cols, 0.0);
  for (int k = 0; k < kk; ++k) {
    for (int i = 0; i < ii; ++i) {
      double xi = x[k * ii + i];
      if (xi <= 0.0) continue;
      const double* row = gtilde_.row(k * ii + i);
      for (int c = 0; c < cols; ++c) xd.z[c] += xi * row[c];
    }
  }
  if (cont_ == nullptr || alpha_ >= 1.0) return xd;
  const SimplexGrid& pg = cont_->grid().p;
  const int nq = cont_->grid().q.size();
  xd.w.assign(nq, 0.0);
  Vec post(kk);
  std::vector<std::pair<int, double>> wts;
  for (int i = 0; i < ii; ++i) {
    double mass = 0.0;
    for (int k = 0; k < kk; ++k) {
      post[k] = p_[k] * x[k * ii + i];
      mass += post[k];
    }
    if (mass <= kZeroMass) continue;  // action never seen, no posterior
    for (int k = 0; k < kk; ++k) post[k] /= mass;
    Vec adv = vec_mat(post, spec_.chain_k.matrix);
    pg.interpolate(adv, wts);
    for (const auto& [pi, wt] : wts) {
      const double* frow = cont_->values().data() + static_cast<size_t>(pi) * nq;
      double scale = mass * wt;
      for (int b = 0; b < nq; ++b) xd.w[b] += scale * frow[b];
    }
  }
  return xd;
}

ShapleyObjective::YData ShapleyObjective::make_y(const Vec& y) const {
  const int ll = spec_.L(), jj = spec_.J();
  YData yd;
  yd.yflat = y;
  if (cont_ == nullptr || alpha_ >= 1.0) return yd;
  const SimplexGrid& qg = cont_->grid().q;
  Vec post(ll);
  std::vector<std::pair<int, double>> wts;
  for (int j = 0; j < jj; ++j) {
    double mass = 0.0;
    for (int l = 0; l < ll; ++l) {
      post[l] = q_[l] * y[l * jj + j];
      mass += post[l];
    }
    if (mass <= kZeroMass) continue;
    for (int l = 0; l < ll; ++l) post[l] /= mass;
    Vec adv = vec_mat(post, spec_.chain_l.matrix);
    qg.interpolate(adv, wts);
    for (const auto& [qi, wt] : wts) yd.vbar.emplace_back(qi, mass * wt);
  }
  return yd;
}

double ShapleyObjective::combine(const XData& xd, const YData& yd) const {
  double base = 0.0;
  for (size_t c = 0; c < xd.z.size(); ++c) base += xd.z[c] * yd.yflat[c];
  double total = alpha_ * base;
  if (!xd.w.empty()) {
    double contv = 0.0;
    for (const auto& [qi, wt] : yd.vbar) contv += xd.w[qi] * wt;
    total += (1.0 - alpha_) * contv;
  }
  return total;
}

double ShapleyObjective::eval(const Vec& x, const Vec& y) const {
  return combine(make_x(x), make_y(y));
}

void ShapleyObjective::prepare_x(const std::vector<Vec>& xs) {
  xdata_.clear();
  xdata_.reserve(xs.size());
  for (const Vec& x : xs) xdata_.push_back(make_x(x));
}

void ShapleyObjective::prepare_y(const std::vector<Vec>& ys) {
  ydata_.clear();
  ydata_.reserve(ys.size());
  for (const Vec& y : ys) ydata_.push_back(make_y(y));
}

void ShapleyObjective::pair_matrix(Matrix& out) const {
  const int nr = static_cast<int>(xdata_.size());
  const int nc = static_cast<int>(ydata_.size());
  out = Matrix(nr, nc);
  for (int a = 0; a < nr; ++a) {
    double* row = out.row(a);
    for (int b = 0; b < nc; ++b) row[b] = combine(xdata_[a], ydata_[b]);
  }
}

Vec ShapleyObjective::row_values(const Vec& x) const {
  XData xd = make_x(x);
  Vec vals(ydata_.size());
  for (size_t b = 0; b < ydata_.size(); ++b) vals[b] = combine(xd, ydata_[b]);
  return vals;
}

Vec ShapleyObjective::col_values(const Vec& y) const {
  YData yd = make_y(y);
  Vec vals(xdata_.size());
  for (size_t a = 0; a < xdata_.size(); ++a) vals[a] = combine(xdata_[a], yd);
  return vals;
}

SaddleResult solve_stage_game(const GameSpec& spec, const Vec& p, const Vec& q,
                              double alpha, const ValueTable* continuation,
                              const SaddleDomain& xdom,
                              const SaddleDomain& ydom,
                              const SaddleOptions& options) {
  ShapleyObjective objective(spec, p, q, alpha, continuation);
  return saddle_eval(objective, xdom, ydom, options);
}

DomainSet unconstrained_domains(int states, int actions) {
  DomainSet set;
  set.shared = std::make_shared<SaddleDomain>(
      SaddleDomain::product(std::vector<int>(states, actions)));
  return set;
}

ValueTable shapley_step(const GameSpec& spec, const ValueTable& f,
                        double alpha, const DomainSet& xdoms,
                        const DomainSet& ydoms, const SaddleOptions& options) {
  PairGridPtr grid = f.grid_ptr();
  ValueTable out(grid, f.lipschitz());
  const int np = grid->p.size();
  const int nq = grid->q.size();
  double step_gap = 0.0;
  for (int pi = 0; pi < np; ++pi) {
    Vec p = grid->p.point(pi);
    const SaddleDomain& xd = xdoms.at(pi);
    for (int qi = 0; qi < nq; ++qi) {
      Vec q = grid->q.point(qi);
      ShapleyObjective objective(spec, p, q, alpha, &f);
      SaddleResult r = saddle_eval(objective, xd, ydoms.at(qi), options);
      out.at(pi, qi) = r.value;
      step_gap = std::max(step_gap, r.gap);
    }
  }
  // Stage certificates add on top of what the continuation table carried.
  out.set_solver_gap(step_gap + (1.0 - alpha) * f.solver_gap());
  return out;
}

std::vector<ValueTable> compute_value_tables(
    const GameSpec& spec, int horizon, PairGridPtr grid,
    const DomainSet& xdoms, const DomainSet& ydoms,
    const SaddleOptions& options, double lipschitz) {
  if (horizon < 1) fail(ErrorCode::kBadArgument, "horizon must be positive");
  std::vector<ValueTable> tables;
  tables.reserve(horizon);
  ValueTable zero(grid, lipschitz);
  tables.push_back(shapley_step(spec, zero, 1.0, xdoms, ydoms, options));
  for (int t = 1; t < horizon; ++t) {
    tables.push_back(shapley_step(spec, tables.back(), 1.0 / (t + 1), xdoms,
                                  ydoms, options));
  }
  return tables;
}

std::vector<ValueTable> compute_v(const GameSpec& spec, int horizon,
                                  int resolution, double tol) {
  if (resolution < 1) {
    fail(ErrorCode::kBadArgument, "grid resolution must be positive");
  }
  PairGridPtr grid = make_pair_grid(spec.K(), spec.L(), resolution);
  DomainSet xd = unconstrained_domains(spec.K(), spec.I());
  DomainSet yd = unconstrained_domains(spec.L(), spec.J());
  SaddleOptions options;
  options.tol = tol;
  return compute_value_tables(spec, horizon, grid, xd, yd, options, 1.0);
}

}  // namespace mcgs
