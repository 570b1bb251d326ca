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

#ifndef MCGS_GAME_HPP_
#define MCGS_GAME_HPP_

#include <string>
#include <vector>

#include "mcgs/chain.hpp"
#include "mcgs/common.hpp"

namespace mcgs {

// Zero-sum repeated game where each player privately observes a state that
// follows its own finite chain. Player 1 (states k, actions i) maximizes the
// stage payoff g(k,l,i,j) in [-1,1]; player 2 (states l, actions j)
// minimizes. Construction enforces recurrent, aperiodic chains.
struct GameSpec {
  std::vector<std::string> states_k, states_l, actions_i, actions_j;
  std::vector<double> payoff;  // [K][L][I][J], row-major
  ChainAnalysis chain_k, chain_l;
  Vec p0, q0;

  int K() const { return static_cast<int>(states_k.size()); }
  int L() const { return static_cast<int>(states_l.size()); }
  int I() const { return static_cast<int>(actions_i.size()); }
  int J() const { return static_cast<int>(actions_j.size()); }

  double g(int k, int l, int i, int j) const {
    return payoff[((static_cast<size_t>(k) * L() + l) * I() + i) * J() + j];
  }

  static GameSpec create(std::vector<std::string> states_k,
                         std::vector<std::string> states_l,
                         std::vector<std::string> actions_i,
                         std::vector<std::string> actions_j,
                         std::vector<double> payoff, StochasticMatrix mk,
                         StochasticMatrix ml, Vec p0, Vec q0);
};

// Role swap: player 2 of the original becomes the maximizer of the
// transposed game (payoffs negated, states/actions/chains/priors exchanged).
GameSpec transpose_game(const GameSpec& spec);

// One player's stage behavior: a mixed action per private state.
struct BehavioralAction {
  Matrix rows;  // states x actions, each row a distribution

  static BehavioralAction uniform(int states, int actions);
  static BehavioralAction from_flat(const Vec& flat, int states, int actions);
  Vec flat() const;
  int states() const { return rows.rows(); }
  int actions() const { return rows.cols(); }
};

// Expected payoff sum_{k,l,i,j} p[k] q[l] x[k][i] y[l][j] g(k,l,i,j).
double stage_payoff(const GameSpec& spec, const Vec& p, const Vec& q,
                    const BehavioralAction& x, const BehavioralAction& y);

// Distribution of the visible action: marginal[i] = sum_k p[k] x[k][i].
Vec action_marginal(const Vec& p, const BehavioralAction& x);

// Belief about the private state after seeing the owner play `action`.
// A zero-probability action returns the prior unchanged.
Vec bayes_posterior(const Vec& p, const BehavioralAction& x, int action);

// One chain step: p * M.
Vec advance(const Vec& p, const Matrix& m);

}  // namespace mcgs

#endif  // MCGS_GAME_HPP_
