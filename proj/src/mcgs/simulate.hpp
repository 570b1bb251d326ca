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
// Play simulation: strategy objects built from history-dependent kernels,
// exact Bayesian posterior tracking, exhaustive small-horizon law
// enumeration, constructive block strategies on top of the concealed-value
// solver, and martingale diagnostics of the tracked beliefs.

#ifndef MCGS_SIMULATE_HPP_
#define MCGS_SIMULATE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "mcgs/game.hpp"
#include "mcgs/mz.hpp"
#include "mcgs/nonrevealing.hpp"

namespace mcgs {

// Public actions seen from one player's perspective: (own, opponent).
using History = std::vector<std::pair<int, int>>;

// One player's decision rule: the public history plus the current private
// state determine the mixed action (the state indexes the returned rows).
// Implementations may cache by history and must answer repeated act()
// calls for the same history consistently, because trackers and shared
// opponent models replay them. forget() drops per-run state.
class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual BehavioralAction act(const History& history) = 0;
  virtual void forget() {}
};

using KernelPtr = std::shared_ptr<Kernel>;

KernelPtr constant_kernel(BehavioralAction action);
KernelPtr uniform_kernel(int states, int actions);
KernelPtr function_kernel(std::function<BehavioralAction(const History&)> fn);

// Mixture strategy: a component is selected once at the start of play with
// probability weight_s * state_prior_s[k1] / prior()[k1] given the initial
// private state k1, and its kernel is played from then on. The declared
// components let outside observers reproduce the induced behavior exactly.
struct StrategyComponent {
  double weight;
  Vec state_prior;
  KernelPtr kernel;
};

struct Strategy {
  std::vector<StrategyComponent> components;

  Vec prior() const;    // sum_s weight_s * state_prior_s
  void forget() const;  // resets every component kernel
};

Strategy single_kernel_strategy(KernelPtr kernel, Vec prior);

// Composition selected by the initial private state: part s plays with
// probability weights[s] * parts[s].first[k1] / p[k1], where p is the
// weighted average of the part beliefs. The induced law of play is exactly
// the weights-mixture of the part laws. Component strategies must declare
// priors matching their stated beliefs.
Strategy split_strategy(const Vec& weights,
                        const std::vector<std::pair<Vec, Strategy>>& parts);

// One stage of one run. Posteriors are the outside view of the next
// private states given the public history through this stage; the hats are
// their long-run projections through the chains' limit matrices.
struct StageRecord {
  int state_k = 0, state_l = 0;
  int action_i = 0, action_j = 0;
  double payoff = 0.0;
  Vec p, q;
  Vec p_hat, q_hat;
};

struct PlayRecord {
  Vec p0, q0;  // beliefs entering the first stage
  Vec p0_hat, q0_hat;
  std::vector<StageRecord> stages;
  double average_payoff = 0.0;
};

struct SimulationStats {
  int runs = 0;
  int horizon = 0;
  double mean = 0.0;       // mean stage-average payoff across runs
  double std_error = 0.0;  // sample standard error of that mean
  std::vector<PlayRecord> records;
};

// Independent seeded runs of the stage game under the declared strategies.
// Posterior tracking is exact Bayes against the declared components. Runs
// derive their generators from (seed, run index) only, so results are
// reproducible and order independent. record_limit < 0 keeps every record.
SimulationStats simulate(const GameSpec& spec, const Strategy& sigma,
                         const Strategy& tau, int horizon, int runs,
                         uint64_t seed, int record_limit = -1);

// Exact law of the public action history under the declared strategies.
// Keys interleave actions as i1, j1, ..., iT, jT; zero-probability
// histories are omitted. Posteriors are recorded after full histories.
// Cost grows like (I*J)^horizon; meant for short horizons.
struct HistoryLaw {
  int horizon = 0;
  std::map<std::vector<int>, double> prob;
  std::map<std::vector<int>, Vec> posterior_p, posterior_q;
  double expected_average_payoff = 0.0;
};

HistoryLaw enumerate_history_law(const GameSpec& spec, const Strategy& sigma,
                                 const Strategy& tau, int horizon);

// Frequency law of the recorded plays truncated to the given horizon.
HistoryLaw empirical_history_law(const std::vector<PlayRecord>& records,
                                 int horizon);

// Half the L1 distance between the two laws over the union of histories.
double total_variation(const HistoryLaw& a, const HistoryLaw& b);

// Exact worst one-step gap between projected posteriors and their
// conditional expectations over all positive-probability histories up to
// the horizon, both players. Zero up to rounding certifies the martingale
// property of the projections.
double max_martingale_defect(const GameSpec& spec, const Strategy& sigma,
                             const Strategy& tau, int horizon);

// Statistical checks over recorded plays: per-stage per-coordinate z
// statistics of the projected-posterior increments (large values flag a
// broken martingale) and the cumulative L1 variation against the
// dimensional bound sqrt(horizon * (dim - 1)).
struct MartingaleReport {
  double max_abs_z = 0.0;
  double variation_p = 0.0, variation_q = 0.0;
  double variation_se_p = 0.0, variation_se_q = 0.0;
  double bound_p = 0.0, bound_q = 0.0;
  bool within_bounds = false;
};

MartingaleReport martingale_diagnostics(const std::vector<PlayRecord>& records);

// Perturbed optimal concealed play at (p, q): with probability epsilon the
// whole horizon is played uniformly, otherwise the saddle strategy is
// extracted stage by stage from the constrained recursion, solved lazily
// along the realized path with posteriors tracked against the solved
// opponent model. vhat_stage holds the concealed values for horizons
// 1..T0 on a shared grid (compute_vhat output); T0 is its size. Play past
// T0 re-solves from the tracked beliefs as a fresh block.
Strategy nr_optimal_block_strategy(
    const GameSpec& spec, const Vec& p, const Vec& q,
    std::shared_ptr<const std::vector<ValueTable>> vhat_stage, double epsilon,
    const SaddleOptions& options = SaddleOptions());

// Block play defending the certificate w: every t0 stages the tracked
// beliefs decide the regime. Where the concealed limit value dominates w
// the block plays the perturbed concealed-optimal strategy; elsewhere the
// belief is first split toward points where it does (weights chosen by the
// initial state of the block, concealing nothing it should not) and the
// atom's strategy is played. Opponent posteriors are tracked against
// opponent_model, exact when the model matches the actual opponent.
struct BlockStrategyConfig {
  ValueTable w;                   // balanced certificate to defend
  const NrLimit* vhat = nullptr;  // concealed limit: comparisons and splits
  std::shared_ptr<const std::vector<ValueTable>> vhat_stage;  // horizons 1..t0
  int t0 = 1;
  double epsilon = 0.05;   // in (0, 1/actions)
  double split_tol = 1e-3;  // slack for the cav certificate at w
  SaddleOptions saddle;
  Strategy opponent_model;

  explicit BlockStrategyConfig(ValueTable w_table) : w(std::move(w_table)) {}
};

Strategy block_strategy(const GameSpec& spec,
                        const BlockStrategyConfig& config);

}  // namespace mcgs

#endif  // MCGS_SIMULATE_HPP_
