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

#ifndef MCGS_CHAIN_HPP_
#define MCGS_CHAIN_HPP_

#include <vector>

#include "mcgs/common.hpp"

namespace mcgs {

// Row-stochastic transition matrix. Construction validates: entries
// nonnegative, each row sums to one within 1e-12.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Matrix m);
  static StochasticMatrix identity(int n);

  int size() const { return m_.rows(); }
  double at(int i, int j) const { return m_.at(i, j); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

// Structural decomposition of a finite chain: recurrence classes (closed
// communicating classes), transient states, invariant measure per class,
// limit matrix B = lim_t A^t (Cesaro limit when periodic), and the period
// T0 = lcm of class periods, so that M^T0 restricted to each class is
// aperiodic.
struct ChainAnalysis {
  Matrix matrix;                        // the chain itself
  std::vector<std::vector<int>> classes;  // recurrent classes, states sorted
  std::vector<int> transient;             // transient states, sorted
  std::vector<int> class_of;              // state -> class index, -1 transient
  std::vector<Vec> invariant_measures;    // one per class, full-length vectors
  std::vector<int> class_periods;
  Matrix limit_matrix;                    // B, row k = long-run law from k
  int period = 1;                         // lcm of class periods
  bool has_transient = false;

  int size() const { return matrix.rows(); }
  int num_classes() const { return static_cast<int>(classes.size()); }
};

// Decomposes the chain. With allow_transient false, any transient state is a
// hard error; with true, transient rows of B hold absorption-weighted
// mixtures of the class invariant measures.
ChainAnalysis analyze_chain(const StochasticMatrix& m,
                            bool allow_transient = false);

// M^T0; recurrent classes of the original chain become aperiodic (possibly
// splitting into cyclic subclasses, each a class of the lifted chain).
StochasticMatrix aperiodic_lift(const ChainAnalysis& analysis);

// p decomposed over recurrence classes: lambda[r] is the mass on class r,
// conditionals[r] the renormalized restriction (the class invariant measure
// when the mass vanishes). Transient mass is a precondition violation.
struct LambdaDecomposition {
  Vec lambda;                       // length num_classes
  std::vector<Vec> conditionals;    // full-length vectors, one per class
};

LambdaDecomposition lambda_decompose(const Vec& p, const ChainAnalysis& a);

// Recombines a decomposition back into a belief.
Vec lambda_recombine(const LambdaDecomposition& d, const ChainAnalysis& a);

// Quasi-distance adapted to the class structure:
//   S(p,p') = |lambda - lambda'|_1
//           + sum over classes carrying mass in both of
//             lambda'[r] * |p_{|r} - p'_{|r}|_1.
// Satisfies |p-p'|_1 <= S <= 3 |p-p'|_1 and never increases along the chain.
double s_value(const Vec& p, const Vec& p2, const ChainAnalysis& a);

// Belief whose class masses are theta and class conditionals are the
// invariant measures: sum_r theta[r] * pstar(r).
Vec lift_class_masses(const Vec& theta, const ChainAnalysis& a);

// Class masses of p: lambda(p).
Vec class_masses(const Vec& p, const ChainAnalysis& a);

// Grid over the fiber {p : lambda(p) = class_masses}: product of
// denominator-`resolution` grids on each supported class simplex.
std::vector<Vec> fiber_grid(const Vec& class_masses_in, int resolution,
                            const ChainAnalysis& a);

}  // namespace mcgs

#endif  // MCGS_CHAIN_HPP_
