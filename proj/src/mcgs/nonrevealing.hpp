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

#ifndef MCGS_NONREVEALING_HPP_
#define MCGS_NONREVEALING_HPP_

#include <vector>

#include "mcgs/shapley.hpp"

namespace mcgs {

// Strategies at p that keep the long-run class mixture fixed: for every
// action i and recurrence class r,
//   sum_{k in r} p^k x^k(i) = lambda(p)^r * sum_k p^k x^k(i).
// Within-class revelation stays free; the chain washes it out. Always
// contains the state-independent strategies.
Polytope nr_polytope(const Vec& p, const ChainAnalysis& analysis, int actions);

// One information-concealing domain per grid point of one side.
DomainSet nr_domain_set(const SimplexGrid& grid, const ChainAnalysis& analysis,
                        int actions);

// Finite-horizon values with either side restricted to its concealing set.
// Both sides restricted gives the concealed-information value; one side
// gives the bounding tables around the unrestricted value.
std::vector<ValueTable> compute_constrained_values(const GameSpec& spec,
                                                   int horizon, int resolution,
                                                   double tol, bool constrain_x,
                                                   bool constrain_y);

// Concealed-information values vhat_1..vhat_T (both sides constrained).
std::vector<ValueTable> compute_vhat(const GameSpec& spec, int horizon,
                                     int resolution, double tol);

// Worst observed excess of table differences over the structural metric
// S (and over the plain 3*L1 bound) across sampled belief pairs; negative
// values mean the bounds hold with room to spare.
struct LipschitzReport {
  double s_violation = 0.0;
  double l1_violation = 0.0;
};

LipschitzReport check_s_lipschitz(const std::vector<ValueTable>& tables,
                                  const ChainAnalysis& ak,
                                  const ChainAnalysis& al, int samples,
                                  uint64_t seed);

// Worst midpoint-concavity defect of the table along p-fibers (fixed class
// masses), maximized over fiber point pairs and q grid points. Zero or
// negative means concave within the sampled set.
double fiber_concavity_violation(const ValueTable& table,
                                 const ChainAnalysis& analysis,
                                 int mass_resolution, int fiber_resolution);

// Long-horizon limit of the concealed value. The limit depends only on the
// class masses, so it is stored on the class-mass simplices; `full` keeps
// the last full-grid table that produced it.
struct NrLimit {
  ValueTable reduced;
  ValueTable full;
  int horizon = 0;
  double increment = 0.0;          // sup diff of the last horizon doubling
  double balanced_residual = 0.0;  // max |vhat(p,q) - vhat(pB,qC)|
  double error_bound = 0.0;        // increment + interpolation error
  bool converged = false;

  NrLimit(ValueTable r, ValueTable f)
      : reduced(std::move(r)), full(std::move(f)) {}
};

// Doubles the horizon until consecutive tables differ by at most tol in
// sup norm (or max_horizon is hit; the best estimate is returned with
// converged = false). stage_tol is the per-stage saddle tolerance.
NrLimit estimate_vhat_limit(const GameSpec& spec, int resolution, double tol,
                            int max_horizon, double stage_tol);

// The limit value at full beliefs through the class-mass identity.
double nr_limit_eval(const NrLimit& limit, const GameSpec& spec, const Vec& p,
                     const Vec& q);

}  // namespace mcgs

#endif  // MCGS_NONREVEALING_HPP_
