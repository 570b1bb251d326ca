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

#include "mcgs/mz.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mcgs/lp.hpp"

namespace mcgs {

namespace {

constexpr double kAtomEps = 1e-12;

// Shared LP skeleton for one grid side: maximize or minimize sum of
// lambda_m * value_m over convex weightings of the grid atoms hitting a
// target barycenter. Columns never change; only c and b do.
struct EnvelopeLp {
  explicit EnvelopeLp(const SimplexGrid& grid) : grid_(grid) {
    lp_.n = grid.size();
    lp_.c.assign(grid.size(), 0.0);
    lp_.a_eq = Matrix(grid.dim(), grid.size());
    for (int m = 0; m < grid.size(); ++m) {
      Vec pt = grid.point(m);
      for (int k = 0; k < grid.dim(); ++k) lp_.a_eq.at(k, m) = pt[k];
    }
    lp_.b_eq.assign(grid.dim(), 0.0);
  }

  double solve(const Vec& values, const Vec& target, bool maximize,
               Splitting* atoms) {
    lp_.c = values;
    lp_.b_eq = target;
    lp_.maximize = maximize;
    LpResult r = lp_solve(lp_);
    if (r.status != LpStatus::kOptimal) {
      fail(ErrorCode::kLpFailure, "envelope program did not solve");
    }
    if (atoms != nullptr) {
      atoms->atoms.clear();
      double total = 0.0;
      for (int m = 0; m < grid_.size(); ++m) {
        if (r.x[m] > kAtomEps) {
          atoms->atoms.push_back({r.x[m], grid_.point(m)});
          total += r.x[m];
        }
      }
      for (auto& atom : atoms->atoms) atom.weight /= total;
    }
    return r.value;
  }

 private:
  const SimplexGrid& grid_;
  LpProblem lp_;
};

ValueTable like(const ValueTable& f) {
  return ValueTable(f.grid_ptr(), f.lipschitz());
}

}  // namespace

Vec Splitting::barycenter() const {
  Vec p(atoms.empty() ? 0 : atoms[0].point.size(), 0.0);
  for (const Atom& a : atoms) {
    for (size_t k = 0; k < p.size(); ++k) p[k] += a.weight * a.point[k];
  }
  return p;
}

ValueTable cav_i(const ValueTable& f) {
  const PairGrid& grid = f.grid();
  ValueTable out = like(f);
  out.set_solver_gap(f.solver_gap());
  EnvelopeLp lp(grid.p);
  Vec section(grid.p.size());
  for (int qi = 0; qi < grid.q.size(); ++qi) {
    for (int m = 0; m < grid.p.size(); ++m) section[m] = f.at(m, qi);
    for (int pi = 0; pi < grid.p.size(); ++pi) {
      out.at(pi, qi) = lp.solve(section, grid.p.point(pi), true, nullptr);
    }
  }
  return out;
}

ValueTable vex_ii(const ValueTable& f) {
  const PairGrid& grid = f.grid();
  ValueTable out = like(f);
  out.set_solver_gap(f.solver_gap());
  EnvelopeLp lp(grid.q);
  Vec section(grid.q.size());
  for (int pi = 0; pi < grid.p.size(); ++pi) {
    for (int m = 0; m < grid.q.size(); ++m) section[m] = f.at(pi, m);
    for (int qi = 0; qi < grid.q.size(); ++qi) {
      out.at(pi, qi) = lp.solve(section, grid.q.point(qi), false, nullptr);
    }
  }
  return out;
}

double cav_i_at(const ValueTable& f, const Vec& p, const Vec& q,
                Splitting* atoms) {
  const PairGrid& grid = f.grid();
  EnvelopeLp lp(grid.p);
  Vec section(grid.p.size());
  for (int m = 0; m < grid.p.size(); ++m) section[m] = f.eval_q(m, q);
  return lp.solve(section, p, true, atoms);
}

ValueTable pointwise_max(const ValueTable& a, const ValueTable& b) {
  if (a.values().size() != b.values().size()) {
    fail(ErrorCode::kBadArgument, "tables live on different grids");
  }
  ValueTable out = like(a);
  out.set_solver_gap(std::max(a.solver_gap(), b.solver_gap()));
  for (size_t i = 0; i < a.values().size(); ++i) {
    out.values()[i] = std::max(a.values()[i], b.values()[i]);
  }
  return out;
}

ValueTable pointwise_min(const ValueTable& a, const ValueTable& b) {
  if (a.values().size() != b.values().size()) {
    fail(ErrorCode::kBadArgument, "tables live on different grids");
  }
  ValueTable out = like(a);
  out.set_solver_gap(std::max(a.solver_gap(), b.solver_gap()));
  for (size_t i = 0; i < a.values().size(); ++i) {
    out.values()[i] = std::min(a.values()[i], b.values()[i]);
  }
  return out;
}

MzResult mz_fixed_point_from(const ValueTable& f, ValueTable w0, double tol,
                             int max_iter) {
  if (tol <= 0.0 || max_iter < 1) {
    fail(ErrorCode::kBadArgument, "fixed point needs tol > 0, max_iter >= 1");
  }
  MzResult res(std::move(w0));
  for (int iter = 1; iter <= max_iter; ++iter) {
    ValueTable a = vex_ii(pointwise_max(res.w, f));
    res.w = cav_i(pointwise_min(a, f));
    res.iterations = iter;
    res.residual_vex =
        ValueTable::sup_diff(res.w, vex_ii(pointwise_max(res.w, f)));
    res.residual_cav =
        ValueTable::sup_diff(res.w, cav_i(pointwise_min(res.w, f)));
    if (std::max(res.residual_vex, res.residual_cav) <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

MzResult mz_fixed_point(const ValueTable& f, double tol, int max_iter) {
  return mz_fixed_point_from(f, f, tol, max_iter);
}

ValueTable balanced_lift(const ValueTable& reduced, const ChainAnalysis& ak,
                         const ChainAnalysis& al, PairGridPtr grid) {
  // Class masses are 1-Lipschitz in the belief, so the lift keeps the
  // reduced table's modulus.
  ValueTable out(grid, reduced.lipschitz());
  out.set_solver_gap(reduced.solver_gap());
  std::vector<Vec> masses_q;
  masses_q.reserve(grid->q.size());
  for (int qi = 0; qi < grid->q.size(); ++qi) {
    masses_q.push_back(class_masses(grid->q.point(qi), al));
  }
  for (int pi = 0; pi < grid->p.size(); ++pi) {
    Vec mp = class_masses(grid->p.point(pi), ak);
    for (int qi = 0; qi < grid->q.size(); ++qi) {
      out.at(pi, qi) = reduced.eval(mp, masses_q[qi]);
    }
  }
  return out;
}

MembershipReport membership_c_plus(const ValueTable& w, const ValueTable& f,
                                   double tol) {
  MembershipReport rep;
  rep.shape_residual = ValueTable::sup_diff(cav_i(w), w);
  ValueTable bound = vex_ii(pointwise_max(w, f));
  double worst = 0.0;
  for (size_t i = 0; i < w.values().size(); ++i) {
    worst = std::max(worst, bound.values()[i] - w.values()[i]);
  }
  rep.inequality_residual = worst;
  rep.member = rep.shape_residual <= tol && rep.inequality_residual <= tol;
  return rep;
}

MembershipReport membership_c_minus(const ValueTable& w, const ValueTable& f,
                                    double tol) {
  MembershipReport rep;
  rep.shape_residual = ValueTable::sup_diff(vex_ii(w), w);
  ValueTable bound = cav_i(pointwise_min(w, f));
  double worst = 0.0;
  for (size_t i = 0; i < w.values().size(); ++i) {
    worst = std::max(worst, w.values()[i] - bound.values()[i]);
  }
  rep.inequality_residual = worst;
  rep.member = rep.shape_residual <= tol && rep.inequality_residual <= tol;
  return rep;
}

Splitting splitting_for_cav(const ValueTable& w, const ValueTable& f,
                            const Vec& p, const Vec& q, double tol) {
  ValueTable h = pointwise_min(w, f);
  Splitting split;
  double envelope = cav_i_at(h, p, q, &split);
  double here = w.eval(p, q);
  if (here > envelope + tol) {
    fail(ErrorCode::kPreconditionViolated,
         "belief value exceeds its concealable envelope");
  }
  // At basic atoms the envelope touches min(w,f), so w <= f there whenever
  // the envelope dominates w; verify numerically.
  for (const Splitting::Atom& atom : split.atoms) {
    if (w.eval(atom.point, q) > f.eval(atom.point, q) + tol) {
      fail(ErrorCode::kPreconditionViolated,
           "splitting atom would leak value");
    }
  }
  return split;
}

}  // namespace mcgs
