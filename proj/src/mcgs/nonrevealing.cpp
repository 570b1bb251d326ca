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

#include "mcgs/nonrevealing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace mcgs {

namespace {

constexpr double kMassEps = 1e-12;

Vec random_belief(Rng& rng, int dim) {
  Vec p(dim);
  double sum = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

}  // namespace

Polytope nr_polytope(const Vec& p, const ChainAnalysis& analysis,
                     int actions) {
  LambdaDecomposition d = lambda_decompose(p, analysis);  // rejects transient
  const int kk = analysis.size();
  Polytope poly;
  poly.blocks = std::vector<int>(kk, actions);
  std::vector<Vec> rows;
  for (int r = 0; r < analysis.num_classes(); ++r) {
    double lam = d.lambda[r];
    // Classes without mass impose nothing; a single supported class makes
    // every row vanish.
    if (lam <= kMassEps || lam >= 1.0 - kMassEps) continue;
    for (int i = 0; i < actions; ++i) {
      Vec row(static_cast<size_t>(kk) * actions, 0.0);
      for (int k = 0; k < kk; ++k) {
        double coef =
            (analysis.class_of[k] == r) ? p[k] * (1.0 - lam) : -lam * p[k];
        row[static_cast<size_t>(k) * actions + i] = coef;
      }
      rows.push_back(std::move(row));
    }
  }
  poly.extra_eq = Matrix(static_cast<int>(rows.size()), kk * actions);
  poly.extra_b.assign(rows.size(), 0.0);
  for (size_t r = 0; r < rows.size(); ++r) {
    double* out = poly.extra_eq.row(static_cast<int>(r));
    std::copy(rows[r].begin(), rows[r].end(), out);
  }
  return poly;
}

DomainSet nr_domain_set(const SimplexGrid& grid, const ChainAnalysis& analysis,
                        int actions) {
  DomainSet set;
  set.per_point.reserve(grid.size());
  for (int idx = 0; idx < grid.size(); ++idx) {
    set.per_point.push_back(std::make_shared<SaddleDomain>(
        SaddleDomain::from_polytope(nr_polytope(grid.point(idx), analysis,
                                                actions))));
  }
  return set;
}

std::vector<ValueTable> compute_constrained_values(const GameSpec& spec,
                                                   int horizon, int resolution,
                                                   double tol, bool constrain_x,
                                                   bool constrain_y) {
  if (resolution < 1) {
    fail(ErrorCode::kBadArgument, "grid resolution must be positive");
  }
  PairGridPtr grid = make_pair_grid(spec.K(), spec.L(), resolution);
  DomainSet xd = constrain_x ? nr_domain_set(grid->p, spec.chain_k, spec.I())
                             : unconstrained_domains(spec.K(), spec.I());
  DomainSet yd = constrain_y ? nr_domain_set(grid->q, spec.chain_l, spec.J())
                             : unconstrained_domains(spec.L(), spec.J());
  SaddleOptions options;
  options.tol = tol;
  double lipschitz = (constrain_x || constrain_y) ? 3.0 : 1.0;
  return compute_value_tables(spec, horizon, grid, xd, yd, options, lipschitz);
}

std::vector<ValueTable> compute_vhat(const GameSpec& spec, int horizon,
                                     int resolution, double tol) {
  return compute_constrained_values(spec, horizon, resolution, tol, true,
                                    true);
}

LipschitzReport check_s_lipschitz(const std::vector<ValueTable>& tables,
                                  const ChainAnalysis& ak,
                                  const ChainAnalysis& al, int samples,
                                  uint64_t seed) {
  Rng rng(seed);
  LipschitzReport rep;
  rep.s_violation = std::numeric_limits<double>::lowest();
  rep.l1_violation = std::numeric_limits<double>::lowest();
  for (int s = 0; s < samples; ++s) {
    Vec p = random_belief(rng, ak.size());
    Vec p2 = random_belief(rng, ak.size());
    Vec q = random_belief(rng, al.size());
    Vec q2 = random_belief(rng, al.size());
    for (const ValueTable& t : tables) {
      double base = t.eval(p, q);
      double dp = base - t.eval(p2, q);
      rep.s_violation = std::max(rep.s_violation, dp - s_value(p, p2, ak));
      rep.s_violation = std::max(rep.s_violation, -dp - s_value(p2, p, ak));
      rep.l1_violation =
          std::max(rep.l1_violation, std::fabs(dp) - 3.0 * l1_dist(p, p2));
      double dq = base - t.eval(p, q2);
      rep.s_violation = std::max(rep.s_violation, dq - s_value(q, q2, al));
      rep.s_violation = std::max(rep.s_violation, -dq - s_value(q2, q, al));
      rep.l1_violation =
          std::max(rep.l1_violation, std::fabs(dq) - 3.0 * l1_dist(q, q2));
    }
  }
  return rep;
}

double fiber_concavity_violation(const ValueTable& table,
                                 const ChainAnalysis& analysis,
                                 int mass_resolution, int fiber_resolution) {
  double worst = -std::numeric_limits<double>::infinity();
  SimplexGrid mass_grid(analysis.num_classes(), mass_resolution);
  const SimplexGrid& qg = table.grid().q;
  const int kk = analysis.size();
  for (int mi = 0; mi < mass_grid.size(); ++mi) {
    std::vector<Vec> fiber =
        fiber_grid(mass_grid.point(mi), fiber_resolution, analysis);
    for (size_t u = 0; u < fiber.size(); ++u) {
      for (size_t w = u + 1; w < fiber.size(); ++w) {
        Vec mid(kk);
        for (int k = 0; k < kk; ++k) mid[k] = 0.5 * (fiber[u][k] + fiber[w][k]);
        for (int qi = 0; qi < qg.size(); ++qi) {
          Vec q = qg.point(qi);
          double chord = 0.5 * (table.eval(fiber[u], q) +
                                table.eval(fiber[w], q));
          worst = std::max(worst, chord - table.eval(mid, q));
        }
      }
    }
  }
  return std::isfinite(worst) ? worst : 0.0;
}

NrLimit estimate_vhat_limit(const GameSpec& spec, int resolution, double tol,
                            int max_horizon, double stage_tol) {
  if (resolution < 1 || max_horizon < 2 || tol <= 0.0) {
    fail(ErrorCode::kBadArgument,
         "limit estimation needs resolution >= 1, max horizon >= 2, tol > 0");
  }
  PairGridPtr grid = make_pair_grid(spec.K(), spec.L(), resolution);
  DomainSet xd = nr_domain_set(grid->p, spec.chain_k, spec.I());
  DomainSet yd = nr_domain_set(grid->q, spec.chain_l, spec.J());
  SaddleOptions options;
  options.tol = stage_tol;
  ValueTable current(grid, 3.0);
  current = shapley_step(spec, current, 1.0, xd, yd, options);
  ValueTable snapshot = current;
  int t = 1;
  int target = 2;
  double increment = std::numeric_limits<double>::infinity();
  bool converged = false;
  while (t < max_horizon) {
    current = shapley_step(spec, current, 1.0 / (t + 1), xd, yd, options);
    ++t;
    if (t == target) {
      increment = ValueTable::sup_diff(current, snapshot);
      snapshot = current;
      target *= 2;
      if (increment <= tol) {
        converged = true;
        break;
      }
    }
  }
  const ChainAnalysis& ak = spec.chain_k;
  const ChainAnalysis& al = spec.chain_l;
  PairGridPtr rgrid =
      make_pair_grid(ak.num_classes(), al.num_classes(), resolution);
  // The limit is 1-Lipschitz in the class masses (S reduces to their L1
  // distance when conditionals sit at the invariant measures).
  ValueTable reduced(rgrid, 1.0);
  for (int ri = 0; ri < rgrid->p.size(); ++ri) {
    Vec pl = lift_class_masses(rgrid->p.point(ri), ak);
    for (int si = 0; si < rgrid->q.size(); ++si) {
      Vec ql = lift_class_masses(rgrid->q.point(si), al);
      reduced.at(ri, si) = current.eval(pl, ql);
    }
  }
  reduced.set_solver_gap(current.solver_gap());
  double residual = 0.0;
  for (int pi = 0; pi < grid->p.size(); ++pi) {
    Vec pb = advance(grid->p.point(pi), ak.limit_matrix);
    for (int qi = 0; qi < grid->q.size(); ++qi) {
      Vec qc = advance(grid->q.point(qi), al.limit_matrix);
      residual = std::max(
          residual, std::fabs(current.at(pi, qi) - current.eval(pb, qc)));
    }
  }
  NrLimit out(std::move(reduced), std::move(current));
  out.horizon = t;
  out.increment = increment;
  out.balanced_residual = residual;
  out.error_bound = increment + out.full.interp_error();
  out.converged = converged;
  return out;
}

double nr_limit_eval(const NrLimit& limit, const GameSpec& spec, const Vec& p,
                     const Vec& q) {
  return limit.reduced.eval(class_masses(p, spec.chain_k),
                            class_masses(q, spec.chain_l));
}

}  // namespace mcgs
