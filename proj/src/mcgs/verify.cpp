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

#include "mcgs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "mcgs/matrix_game.hpp"
#include "mcgs/mz.hpp"
#include "mcgs/nonrevealing.hpp"
#include "mcgs/polytope.hpp"
#include "mcgs/serialize.hpp"
#include "mcgs/shapley.hpp"
#include "mcgs/simulate.hpp"
#include "mcgs/transport.hpp"

namespace mcgs {

namespace {

Vec random_belief(Rng& rng, int dim) {
  Vec p(dim);
  double sum = 0.0;
  for (int i = 0; i < dim; ++i) {
    p[i] = -std::log(1.0 - rng.uniform());
    sum += p[i];
  }
  for (double& x : p) x /= sum;
  return p;
}

// Deterministic history-dependent behavior for the simulator checks.
KernelPtr scripted_kernel(uint64_t salt, int states, int actions) {
  return function_kernel([salt, states, actions](const History& h) {
    uint64_t x = salt * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL;
    for (const auto& step : h) {
      x ^= static_cast<uint64_t>(step.first * 131 + step.second + 7);
      x *= 0x100000001B3ULL;
    }
    Rng r(x);
    BehavioralAction b;
    b.rows = Matrix(states, actions);
    for (int k = 0; k < states; ++k) {
      double sum = 0.0;
      for (int i = 0; i < actions; ++i) {
        b.rows.at(k, i) = r.uniform_in(0.05, 1.0);
        sum += b.rows.at(k, i);
      }
      for (int i = 0; i < actions; ++i) b.rows.at(k, i) /= sum;
    }
    return b;
  });
}

// Shifts mass eps from the heaviest to the lightest coordinate; stays a
// belief for eps below the heaviest entry.
Vec shifted_belief(const Vec& p, double eps) {
  Vec out(p);
  int hi = 0, lo = 0;
  for (size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[hi]) hi = static_cast<int>(i);
    if (p[i] < p[lo]) lo = static_cast<int>(i);
  }
  if (hi == lo) return out;
  double d = std::min(eps, out[hi]);
  out[hi] -= d;
  out[lo] += d;
  return out;
}

struct Battery {
  VerifyReport report;

  void add(const std::string& name, double residual, double bound) {
    VerifyCheck c;
    c.name = name;
    c.residual = residual;
    c.bound = bound;
    c.pass = std::isfinite(residual) && residual <= bound;
    report.checks.push_back(std::move(c));
  }
};

double max_entry_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      worst = std::max(worst, std::fabs(a.at(r, c) - b.at(r, c)));
    }
  }
  return worst;
}

void check_chain(Battery& bat, const GameSpec& spec) {
  double proj = 0.0, inv = 0.0;
  for (const ChainAnalysis* a : {&spec.chain_k, &spec.chain_l}) {
    const Matrix& b = a->limit_matrix;
    proj = std::max(proj, max_entry_diff(mat_mul(b, b), b));
    proj = std::max(proj, max_entry_diff(mat_mul(b, a->matrix), b));
    proj = std::max(proj, max_entry_diff(mat_mul(a->matrix, b), b));
    for (const Vec& pi : a->invariant_measures) {
      inv = std::max(inv, l1_dist(vec_mat(pi, a->matrix), pi));
    }
  }
  bat.add("chain.projection-idempotent", proj, 1e-9);
  bat.add("chain.invariant-measures", inv, 1e-9);
}

void check_chain_sampled(Battery& bat, const GameSpec& spec,
                         const VerifyConfig& cfg) {
  Rng rng(cfg.seed ^ 0x1111);
  double round_trip = 0.0, s_bounds = 0.0, s_contract = 0.0;
  for (int t = 0; t < cfg.samples; ++t) {
    for (const ChainAnalysis* a : {&spec.chain_k, &spec.chain_l}) {
      Vec p = random_belief(rng, a->size());
      LambdaDecomposition d = lambda_decompose(p, *a);
      round_trip = std::max(round_trip, l1_dist(lambda_recombine(d, *a), p));
      Vec p2 = random_belief(rng, a->size());
      double s = s_value(p, p2, *a);
      double l1 = l1_dist(p, p2);
      s_bounds = std::max(s_bounds, l1 - s);
      s_bounds = std::max(s_bounds, s - 3.0 * l1);
      double s_next =
          s_value(vec_mat(p, a->matrix), vec_mat(p2, a->matrix), *a);
      s_contract = std::max(s_contract, s_next - s);
    }
  }
  bat.add("chain.mass-decomposition-roundtrip", round_trip, 1e-9);
  bat.add("chain.s-metric-bounds", s_bounds, 1e-9);
  bat.add("chain.s-metric-contraction", s_contract, 1e-9);
}

void check_grid(Battery& bat, const GameSpec& spec, const VerifyConfig& cfg) {
  Rng rng(cfg.seed ^ 0x2222);
  SimplexGrid grid(spec.K(), cfg.resolution);
  double worst = 0.0;
  std::vector<std::pair<int, double>> w;
  for (int t = 0; t < cfg.samples; ++t) {
    Vec p = random_belief(rng, spec.K());
    grid.interpolate(p, w);
    Vec back(spec.K(), 0.0);
    double mass = 0.0;
    for (const auto& [idx, weight] : w) {
      Vec vertex = grid.point(idx);
      for (int i = 0; i < spec.K(); ++i) back[i] += weight * vertex[i];
      mass += weight;
    }
    worst = std::max(worst, l1_dist(back, p));
    worst = std::max(worst, std::fabs(mass - 1.0));
  }
  bat.add("grid.interpolation-partition", worst, 1e-9);
}

void check_matrix_game(Battery& bat, const GameSpec& spec,
                       const VerifyConfig& cfg) {
  Rng rng(cfg.seed ^ 0x3333);
  double gap = 0.0, certify = 0.0, negate = 0.0;
  int trials = std::max(5, cfg.samples / 5);
  for (int t = 0; t < trials; ++t) {
    Matrix a(spec.I(), spec.J());
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) {
        a.at(i, j) = rng.uniform_in(-1.0, 1.0);
      }
    }
    MatrixGameSolution sol = solve_matrix_game(a);
    gap = std::max(gap, sol.gap);
    // The returned pair must actually certify the value within the gap.
    for (int j = 0; j < a.cols(); ++j) {
      double col = 0.0;
      for (int i = 0; i < a.rows(); ++i) col += sol.row_strategy[i] * a.at(i, j);
      certify = std::max(certify, sol.value - sol.gap - col);
    }
    for (int i = 0; i < a.rows(); ++i) {
      double row = 0.0;
      for (int j = 0; j < a.cols(); ++j) row += sol.col_strategy[j] * a.at(i, j);
      certify = std::max(certify, row - sol.value - sol.gap);
    }
    Matrix neg(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) neg.at(j, i) = -a.at(i, j);
    }
    negate = std::max(negate,
                      std::fabs(solve_matrix_game(neg).value + sol.value));
  }
  bat.add("matrix-game.saddle-gap", gap, 1e-8);
  bat.add("matrix-game.certificate", certify, 1e-8);
  bat.add("matrix-game.negation-symmetry", negate, 1e-8);
}

// Worst excess of successive-table distance over 2/t plus slack, and of the
// one-step dynamics shift over 4/t plus slack.
void check_value_bounds(Battery& bat, const GameSpec& spec,
                        const std::vector<ValueTable>& v, double mesh,
                        const std::string& prefix) {
  double inc_excess = -1.0, shift_excess = -1.0, range = 0.0;
  for (size_t t = 0; t + 1 < v.size(); ++t) {
    double slack =
        2.0 * (v[t].solver_gap() + v[t + 1].solver_gap() + mesh);
    double bound = 2.0 / static_cast<double>(t + 1) + slack;
    inc_excess =
        std::max(inc_excess, ValueTable::sup_diff(v[t], v[t + 1]) - bound);
  }
  const PairGrid& grid = v.back().grid();
  for (size_t t = 0; t < v.size(); ++t) {
    double slack = 2.0 * (v[t].solver_gap() + mesh);
    double bound = 4.0 / static_cast<double>(t + 1) + slack;
    for (int pi = 0; pi < grid.p.size(); ++pi) {
      Vec p = grid.p.point(pi);
      Vec pm = vec_mat(p, spec.chain_k.matrix);
      for (int qi = 0; qi < grid.q.size(); ++qi) {
        Vec q = grid.q.point(qi);
        Vec qn = vec_mat(q, spec.chain_l.matrix);
        double shifted = v[t].eval(pm, qn);
        shift_excess = std::max(
            shift_excess, std::fabs(v[t].at(pi, qi) - shifted) - bound);
        range = std::max(range, std::fabs(v[t].at(pi, qi)));
      }
    }
  }
  bat.add(prefix + ".increment-bound-excess", inc_excess, 0.0);
  bat.add(prefix + ".dynamics-shift-excess", shift_excess, 0.0);
  bat.add(prefix + ".payoff-range", range, 1.0 + 1e-9);
}

// Second differences along lattice lines: concave rows (in p), convex
// columns (in q). Table bias from interpolated continuations can perturb
// grid values on either side, hence the structural slack.
void check_value_shape(Battery& bat, const ValueTable& v,
                       const std::string& prefix) {
  const PairGrid& grid = v.grid();
  double concave = 0.0, convex = 0.0;
  int dim_p = grid.p.dim();
  for (int pi = 0; pi < grid.p.size(); ++pi) {
    const std::vector<int>& c = grid.p.lattice(pi);
    for (int a = 0; a < dim_p; ++a) {
      for (int b = 0; b < dim_p; ++b) {
        if (a == b || c[a] < 1 || c[b] < 1) continue;
        std::vector<int> up(c), down(c);
        ++up[a], --up[b];
        --down[a], ++down[b];
        int ui = grid.p.index_of(up), di = grid.p.index_of(down);
        for (int qi = 0; qi < grid.q.size(); ++qi) {
          double second = v.at(ui, qi) + v.at(di, qi) - 2.0 * v.at(pi, qi);
          concave = std::max(concave, second);
        }
      }
    }
  }
  int dim_q = grid.q.dim();
  for (int qi = 0; qi < grid.q.size(); ++qi) {
    const std::vector<int>& c = grid.q.lattice(qi);
    for (int a = 0; a < dim_q; ++a) {
      for (int b = 0; b < dim_q; ++b) {
        if (a == b || c[a] < 1 || c[b] < 1) continue;
        std::vector<int> up(c), down(c);
        ++up[a], --up[b];
        --down[a], ++down[b];
        int ui = grid.q.index_of(up), di = grid.q.index_of(down);
        for (int pi = 0; pi < grid.p.size(); ++pi) {
          double second = v.at(pi, ui) + v.at(pi, di) - 2.0 * v.at(pi, qi);
          convex = std::max(convex, -second);
        }
      }
    }
  }
  double slack = 4.0 * (v.solver_gap() + v.interp_error()) + 1e-9;
  bat.add(prefix + ".grid-concavity-rows", concave, slack);
  bat.add(prefix + ".grid-convexity-cols", convex, slack);
}

void check_nonrevealing(Battery& bat, const GameSpec& spec,
                        const VerifyConfig& cfg,
                        const std::vector<ValueTable>& v,
                        const std::vector<ValueTable>& vhat, double mesh) {
  Rng rng(cfg.seed ^ 0x4444);
  double infeasible = 0.0;
  for (int t = 0; t < cfg.samples; ++t) {
    Vec p = random_belief(rng, spec.K());
    Polytope poly = nr_polytope(p, spec.chain_k, spec.I());
    Vec row = random_belief(rng, spec.I());
    Vec flat;
    for (int k = 0; k < spec.K(); ++k) {
      flat.insert(flat.end(), row.begin(), row.end());
    }
    if (!polytope_contains(poly, flat, 1e-9)) infeasible += 1.0;
  }
  bat.add("nr.state-independent-feasible", infeasible, 0.0);

  std::vector<ValueTable> vx = compute_constrained_values(
      spec, cfg.horizon, cfg.resolution, cfg.tol, true, false);
  std::vector<ValueTable> vy = compute_constrained_values(
      spec, cfg.horizon, cfg.resolution, cfg.tol, false, true);
  double bracket = -1.0;
  for (size_t t = 0; t < v.size(); ++t) {
    double slack = v[t].solver_gap() + vx[t].solver_gap() +
                   vy[t].solver_gap() + 1e-9;
    const PairGrid& grid = v[t].grid();
    for (int pi = 0; pi < grid.p.size(); ++pi) {
      for (int qi = 0; qi < grid.q.size(); ++qi) {
        bracket = std::max(
            bracket, vx[t].at(pi, qi) - v[t].at(pi, qi) - slack);
        bracket = std::max(
            bracket, v[t].at(pi, qi) - vy[t].at(pi, qi) - slack);
      }
    }
  }
  bat.add("nr.one-sided-bracket-excess", bracket, 0.0);

  check_value_bounds(bat, spec, vhat, mesh, "nr.vhat");
  check_value_shape(bat, vhat.back(), "nr.vhat");

  LipschitzReport lip = check_s_lipschitz(vhat, spec.chain_k, spec.chain_l,
                                          cfg.samples * 10, cfg.seed ^ 0x5555);
  double lip_slack =
      2.0 * (vhat.back().interp_error() + vhat.back().solver_gap()) + 1e-9;
  bat.add("nr.s-lipschitz", std::max(lip.s_violation, lip.l1_violation),
          lip_slack);

  double fiber = fiber_concavity_violation(vhat.back(), spec.chain_k, 3, 4);
  bat.add("nr.fiber-concavity",
          fiber, 4.0 * (vhat.back().solver_gap() + vhat.back().interp_error())
                     + 1e-9);
}

void check_mz(Battery& bat, const GameSpec& spec, const VerifyConfig& cfg,
              const ValueTable& f) {
  ValueTable cav = cav_i(f);
  ValueTable vex = vex_ii(f);
  double cav_resid = 0.0, vex_resid = 0.0;
  const PairGrid& grid = f.grid();
  for (int pi = 0; pi < grid.p.size(); ++pi) {
    for (int qi = 0; qi < grid.q.size(); ++qi) {
      cav_resid = std::max(cav_resid, f.at(pi, qi) - cav.at(pi, qi));
      vex_resid = std::max(vex_resid, vex.at(pi, qi) - f.at(pi, qi));
    }
  }
  cav_resid = std::max(cav_resid, ValueTable::sup_diff(cav_i(cav), cav));
  vex_resid = std::max(vex_resid, ValueTable::sup_diff(vex_ii(vex), vex));
  bat.add("mz.concave-envelope", cav_resid, 1e-7);
  bat.add("mz.convex-envelope", vex_resid, 1e-7);

  MzResult mz = mz_fixed_point(f, 1e-6, 300);
  bat.add("mz.fixed-point-residual",
          std::max(mz.residual_vex, mz.residual_cav), 1e-5);

  ValueTable plus(f.grid_ptr(), f.lipschitz(), 1.0);
  ValueTable minus(f.grid_ptr(), f.lipschitz(), -1.0);
  MzResult from_plus = mz_fixed_point_from(f, plus, 1e-6, 300);
  MzResult from_minus = mz_fixed_point_from(f, minus, 1e-6, 300);
  bat.add("mz.uniqueness",
          ValueTable::sup_diff(from_plus.w, from_minus.w), 2e-5);

  double sandwich = 0.0;
  for (int pi = 0; pi < grid.p.size(); ++pi) {
    for (int qi = 0; qi < grid.q.size(); ++qi) {
      sandwich = std::max(sandwich, vex.at(pi, qi) - mz.w.at(pi, qi));
      sandwich = std::max(sandwich, mz.w.at(pi, qi) - cav.at(pi, qi));
    }
  }
  bat.add("mz.envelope-sandwich", sandwich, 1e-5);

  MembershipReport up = membership_c_plus(mz.w, f, 1e-5);
  MembershipReport down = membership_c_minus(mz.w, f, 1e-5);
  double member = up.member && down.member ? 0.0 : 1.0;
  member = std::max({member, up.shape_residual, up.inequality_residual,
                     down.shape_residual, down.inequality_residual});
  bat.add("mz.solution-set-membership", member, 1e-5);

  Rng rng(cfg.seed ^ 0x6666);
  double split_resid = 0.0;
  double atom_excess = 0.0;
  for (int t = 0; t < std::max(5, cfg.samples / 5); ++t) {
    Vec p = random_belief(rng, spec.K());
    Vec q = random_belief(rng, spec.L());
    Splitting s = splitting_for_cav(mz.w, f, p, q, 1e-5);
    atom_excess = std::max(
        atom_excess,
        static_cast<double>(static_cast<int>(s.atoms.size()) - spec.K()));
    double mass = 0.0;
    for (const auto& atom : s.atoms) {
      mass += atom.weight;
      split_resid = std::max(split_resid,
                             mz.w.eval(atom.point, q) - f.eval(atom.point, q)
                                 - 2e-5);
    }
    split_resid = std::max(split_resid, std::fabs(mass - 1.0) - 1e-9);
    split_resid = std::max(split_resid, l1_dist(s.barycenter(), p) - 1e-9);
    double lifted = 0.0;
    for (const auto& atom : s.atoms) {
      lifted += atom.weight * mz.w.eval(atom.point, q);
    }
    split_resid = std::max(split_resid, mz.w.eval(p, q) - lifted - 2e-5);
  }
  bat.add("mz.splitting-atom-count-excess", atom_excess, 0.0);
  bat.add("mz.splitting-reconstruction-excess", split_resid, 0.0);
}

void check_transport(Battery& bat, const GameSpec& spec,
                     const VerifyConfig& cfg) {
  Rng rng(cfg.seed ^ 0x7777);
  int dim = spec.K();
  const ChainAnalysis& chain = spec.chain_k;
  double cost_resid = 0.0, carry_resid = 0.0, wass_resid = 0.0;
  double order_fail = 0.0;
  for (int t = 0; t < std::max(5, cfg.samples / 5); ++t) {
    // Rebarycentering identity on random convex combinations.
    int n = 1 + static_cast<int>(rng.next_u64() % 3);
    Vec weights = random_belief(rng, n);
    std::vector<Vec> sources;
    Vec mean(dim, 0.0);
    for (int s = 0; s < n; ++s) {
      sources.push_back(random_belief(rng, dim));
      for (int i = 0; i < dim; ++i) mean[i] += weights[s] * sources[s][i];
    }
    Vec target = random_belief(rng, dim);
    std::vector<Vec> moved = laraki_transport(weights, sources, target);
    double cost = 0.0;
    Vec back(dim, 0.0);
    for (int s = 0; s < n; ++s) {
      cost += weights[s] * l1_dist(sources[s], moved[s]);
      for (int i = 0; i < dim; ++i) back[i] += weights[s] * moved[s][i];
    }
    cost_resid = std::max(cost_resid,
                          std::fabs(cost - l1_dist(mean, target)));
    cost_resid = std::max(cost_resid, l1_dist(back, target));

    // Fiber-preserving carry of a two-atom splitting (dirac when no class
    // has room to split).
    Vec p = random_belief(rng, dim);
    FiniteMeasure mu = FiniteMeasure::dirac(p);
    LambdaDecomposition d = lambda_decompose(p, chain);
    for (int r = 0; r < chain.num_classes(); ++r) {
      if (chain.classes[r].size() < 2 || d.lambda[r] < 0.2) continue;
      int a = chain.classes[r][0], b = chain.classes[r][1];
      double room = std::min(p[a], p[b]) * 0.5;
      if (room < 1e-3) continue;
      Vec up(p), down(p);
      up[a] += room, up[b] -= room;
      down[a] -= room, down[b] += room;
      mu.atoms = {{0.5, up}, {0.5, down}};
      break;
    }
    Vec fiber_target = random_belief(rng, dim);
    FiniteMeasure nu = h_transport(mu, fiber_target, chain);
    carry_resid = std::max(carry_resid, l1_dist(nu.mean(), fiber_target));
    double s_sum = 0.0;
    for (size_t m = 0; m < mu.atoms.size(); ++m) {
      s_sum += mu.atoms[m].weight *
               s_value(mu.atoms[m].point, nu.atoms[m].point, chain);
    }
    carry_resid = std::max(
        carry_resid, std::fabs(s_sum - s_value(p, fiber_target, chain)));

    // Transport distance between diracs is the ground distance.
    Vec p2 = random_belief(rng, dim);
    wass_resid = std::max(
        wass_resid, std::fabs(wasserstein_l1(FiniteMeasure::dirac(p),
                                             FiniteMeasure::dirac(p2)) -
                              l1_dist(p, p2)));
    wass_resid = std::max(wass_resid, wasserstein_l1(mu, mu));

    // A measure dominates its own mean point in the convex order, and never
    // one with a different mean.
    if (!convex_order_check(FiniteMeasure::dirac(mu.mean()), mu)) {
      order_fail += 1.0;
    }
    Vec other = shifted_belief(mu.mean(), 0.2);
    if (l1_dist(other, mu.mean()) > 1e-6 &&
        convex_order_check(FiniteMeasure::dirac(other), mu)) {
      order_fail += 1.0;
    }
  }
  bat.add("transport.rebarycenter-identity", cost_resid, 1e-9);
  bat.add("transport.fiber-carry-identity", carry_resid, 1e-9);
  bat.add("transport.wasserstein-dirac", wass_resid, 1e-8);
  bat.add("transport.convex-order", order_fail, 0.0);
}

void check_simulate(Battery& bat, const GameSpec& spec,
                    const VerifyConfig& cfg) {
  int K = spec.K(), L = spec.L(), I = spec.I(), J = spec.J();
  Strategy tau = single_kernel_strategy(
      scripted_kernel(cfg.seed ^ 0x9999, L, J), spec.q0);

  // Mixture law identity: the split of the prior plays exactly like the
  // weighted mixture of its parts.
  Vec pa = shifted_belief(spec.p0, 0.1);
  Vec pb(spec.p0.size());
  bool valid = true;
  for (size_t i = 0; i < pb.size(); ++i) {
    pb[i] = 2.0 * spec.p0[i] - pa[i];
    valid = valid && pb[i] >= 0.0;
  }
  if (!valid) pb = pa = spec.p0;
  Strategy part_a = single_kernel_strategy(
      scripted_kernel(cfg.seed ^ 0xAAAA, K, I), pa);
  Strategy part_b = single_kernel_strategy(
      scripted_kernel(cfg.seed ^ 0xBBBB, K, I), pb);
  Strategy mixed = split_strategy({0.5, 0.5}, {{pa, part_a}, {pb, part_b}});
  HistoryLaw law_mix = enumerate_history_law(spec, mixed, tau, 2);
  HistoryLaw law_a = enumerate_history_law(spec, part_a, tau, 2);
  HistoryLaw law_b = enumerate_history_law(spec, part_b, tau, 2);
  HistoryLaw blended = law_a;
  for (auto& [h, pr] : blended.prob) {
    pr = 0.5 * pr;
    auto it = law_b.prob.find(h);
    if (it != law_b.prob.end()) pr += 0.5 * it->second;
  }
  for (const auto& [h, pr] : law_b.prob) {
    if (blended.prob.find(h) == blended.prob.end()) {
      blended.prob[h] = 0.5 * pr;
    }
  }
  double split_tv = total_variation(law_mix, blended);
  split_tv = std::max(
      split_tv, std::fabs(law_mix.expected_average_payoff -
                          0.5 * (law_a.expected_average_payoff +
                                 law_b.expected_average_payoff)));
  bat.add("simulate.split-law-identity", split_tv, 1e-10);

  bat.add("simulate.posterior-martingale-defect",
          max_martingale_defect(spec, mixed, tau, 3), 1e-9);

  SimulationStats stats = simulate(spec, mixed, tau, 20, 200, cfg.seed);
  MartingaleReport diag = martingale_diagnostics(stats.records);
  double variation_excess = std::max(
      diag.variation_p - diag.bound_p - 3.0 * diag.variation_se_p,
      diag.variation_q - diag.bound_q - 3.0 * diag.variation_se_q);
  bat.add("simulate.variation-bound-excess", variation_excess, 0.0);
  bat.add("simulate.increment-z-score", diag.max_abs_z, 6.0);
}

void check_serialize(Battery& bat, const VerifyConfig& cfg) {
  Rng rng(cfg.seed ^ 0x8888);
  double mismatch = 0.0;
  Vec specials = {0.0, 1.0, -1.0, 1.0 / 3.0, 2.0 / 3.0, 1e-9, -0.125};
  for (int t = 0; t < cfg.samples; ++t) {
    specials.push_back(rng.uniform_in(-2.0, 2.0));
  }
  for (double x : specials) {
    if (parse_number_text(format_double(x), "roundtrip") != x) {
      mismatch += 1.0;
    }
  }
  if (parse_number_text("2/3", "ratio") != 2.0 / 3.0) mismatch += 1.0;
  if (parse_number_text("-1/4", "ratio") != -0.25) mismatch += 1.0;
  bat.add("serialize.number-roundtrip", mismatch, 0.0);
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const VerifyCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

int VerifyReport::failures() const {
  int n = 0;
  for (const VerifyCheck& c : checks) n += c.pass ? 0 : 1;
  return n;
}

VerifyReport run_verification(const GameSpec& spec,
                              const VerifyConfig& config) {
  if (config.horizon < 1 || config.resolution < 2 || !(config.tol > 0.0) ||
      config.samples < 1) {
    fail(ErrorCode::kBadArgument,
         "verification needs horizon >= 1, resolution >= 2, tol > 0, "
         "samples >= 1");
  }
  Battery bat;
  check_chain(bat, spec);
  check_chain_sampled(bat, spec, config);
  check_grid(bat, spec, config);
  check_matrix_game(bat, spec, config);

  std::vector<ValueTable> v =
      compute_v(spec, config.horizon, config.resolution, config.tol);
  double mesh =
      std::max(v.back().grid().p.mesh(), v.back().grid().q.mesh());
  check_value_bounds(bat, spec, v, mesh, "value");
  check_value_shape(bat, v.back(), "value");

  std::vector<ValueTable> vhat =
      compute_vhat(spec, config.horizon, config.resolution, config.tol);
  check_nonrevealing(bat, spec, config, v, vhat, mesh);
  check_mz(bat, spec, config, vhat.back());
  check_transport(bat, spec, config);
  check_simulate(bat, spec, config);
  check_serialize(bat, config);
  return bat.report;
}

std::string verify_csv(const VerifyReport& report) {
  std::string out = "check,status,residual,bound\n";
  for (const VerifyCheck& c : report.checks) {
    out += c.name;
    out += c.pass ? ",pass," : ",FAIL,";
    out += format_double(c.residual) + "," + format_double(c.bound) + "\n";
  }
  return out;
}

}  // namespace mcgs
