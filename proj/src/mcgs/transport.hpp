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
//
// Geometric transport on simplices: moving convex combinations of beliefs to
// new barycenters at minimal L1 cost, rescaling class masses along chain
// fibers, and comparing finite-support measures by Wasserstein distance and
// the convex (dilation) order.

#ifndef MCGS_TRANSPORT_HPP_
#define MCGS_TRANSPORT_HPP_

#include <vector>

#include "mcgs/chain.hpp"
#include "mcgs/common.hpp"

namespace mcgs {

// Probability measure with finite support on a simplex.
struct FiniteMeasure {
  struct Atom {
    double weight;
    Vec point;
  };
  std::vector<Atom> atoms;

  static FiniteMeasure dirac(const Vec& p);

  Vec mean() const;
  // Checks weights are nonnegative and sum to one within 1e-10, and that
  // every atom is a belief of the stated dimension.
  void validate(int dim) const;
};

// Given a convex combination sum_s weights[s] * sources[s] = p, returns
// destinations (p'_s) with sum_s weights[s] * p'_s = target and
//   sum_s weights[s] * ||sources[s] - p'_s||_1 = ||p - target||_1,
// which is the minimum any rebarycentering can cost. Each source sheds
// surplus coordinates in proportion to its own holding and receives deficit
// coordinates in proportion to its total shed mass; the construction is
// closed-form and deterministic.
std::vector<Vec> laraki_transport(const Vec& weights,
                                  const std::vector<Vec>& sources,
                                  const Vec& target);

// Rescales the recurrence-class masses of p from from_masses to to_masses
// while keeping every within-class conditional fixed; classes that p does
// not touch receive their invariant measure. The move costs
// ||result - p||_1 = ||from_masses - to_masses||_1 and splits the fiber
// distance: s_value(p, result) + s_value(result, p2) = s_value(p, p2) for
// any p2 on the to_masses fiber.
Vec affine_fiber_map(const Vec& p, const Vec& from_masses,
                     const Vec& to_masses, const ChainAnalysis& analysis);

// Carries a splitting whose atoms all live on the class-mass fiber of its
// mean p to a splitting of target with the same weights, first rescaling
// class masses and then transporting within each class. The aggregate cost
// satisfies sum_n alpha_n s_value(p_n, p'_n) = s_value(p, target).
FiniteMeasure h_transport(const FiniteMeasure& mu, const Vec& target,
                          const ChainAnalysis& analysis);

// L1-cost optimal transport distance between finite-support measures.
double wasserstein_l1(const FiniteMeasure& mu, const FiniteMeasure& nu);

// Whether nu dominates mu in the convex order, i.e. some dilation maps the
// support of mu onto distributions over the support of nu with matching
// barycenters and marginal. True implies equal means.
bool convex_order_check(const FiniteMeasure& mu, const FiniteMeasure& nu);

}  // namespace mcgs

#endif  // MCGS_TRANSPORT_HPP_
