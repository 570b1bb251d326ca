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

#ifndef MCGS_MZ_HPP_
#define MCGS_MZ_HPP_

#include <vector>

#include "mcgs/chain.hpp"
#include "mcgs/simplex_grid.hpp"

namespace mcgs {

// Convex decomposition of a belief into weighted posterior atoms.
struct Splitting {
  struct Atom {
    double weight;
    Vec point;
  };
  std::vector<Atom> atoms;

  Vec barycenter() const;
};

// Concave envelope in p (for each fixed q column): the tightest function
// above the table that is concave along p, computed as an LP over the
// p-grid atoms. Exact at grid points up to LP tolerance.
ValueTable cav_i(const ValueTable& f);

// Convex envelope in q for each fixed p row; dual of cav_i.
ValueTable vex_ii(const ValueTable& f);

// Envelope value at an arbitrary p with q interpolated; optionally returns
// the optimal atoms (at most dim(p) of them, basic LP solution).
double cav_i_at(const ValueTable& f, const Vec& p, const Vec& q,
                Splitting* atoms);

ValueTable pointwise_max(const ValueTable& a, const ValueTable& b);
ValueTable pointwise_min(const ValueTable& a, const ValueTable& b);

// Fixed point of the paired envelope system
//   w = vex_II Max(w, f)   and   w = cav_I Min(w, f),
// by alternating sweeps; acceptance is by the two equation residuals.
struct MzResult {
  ValueTable w;
  double residual_vex = 0.0;
  double residual_cav = 0.0;
  int iterations = 0;
  bool converged = false;

  explicit MzResult(ValueTable table) : w(std::move(table)) {}
};

MzResult mz_fixed_point(const ValueTable& f, double tol, int max_iter);
MzResult mz_fixed_point_from(const ValueTable& f, ValueTable w0, double tol,
                             int max_iter);

// Extends a table on the class-mass simplices to full beliefs via the
// long-run projection: w(p,q) = reduced(class masses of p, of q).
ValueTable balanced_lift(const ValueTable& reduced, const ChainAnalysis& ak,
                         const ChainAnalysis& al, PairGridPtr grid);

// Membership in the upper/lower solution sets of the envelope system.
// C+: w is I-concave and w >= vex_II Max(w,f).
// C-: w is II-convex and w <= cav_I Min(w,f).
struct MembershipReport {
  bool member = false;
  double shape_residual = 0.0;
  double inequality_residual = 0.0;
};

MembershipReport membership_c_plus(const ValueTable& w, const ValueTable& f,
                                   double tol);
MembershipReport membership_c_minus(const ValueTable& w, const ValueTable& f,
                                    double tol);

// For w below cav_I Min(w,f) at (p,q): a splitting of p into at most dim(p)
// atoms with sum alpha_m p_m = p, w(p_m,q) <= f(p_m,q) + tol at every atom,
// and sum alpha_m w(p_m,q) >= w(p,q) - tol. Atoms come from the optimal
// basis of the envelope LP.
Splitting splitting_for_cav(const ValueTable& w, const ValueTable& f,
                            const Vec& p, const Vec& q, double tol);

}  // namespace mcgs

#endif  // MCGS_MZ_HPP_
