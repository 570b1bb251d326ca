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

#include "mcgs/game.hpp"

#include <cmath>
#include <utility>

namespace mcgs {

GameSpec GameSpec::create(std::vector<std::string> states_k,
                          std::vector<std::string> states_l,
                          std::vector<std::string> actions_i,
                          std::vector<std::string> actions_j,
                          std::vector<double> payoff, StochasticMatrix mk,
                          StochasticMatrix ml, Vec p0, Vec q0) {
  GameSpec s;
  s.states_k = std::move(states_k);
  s.states_l = std::move(states_l);
  s.actions_i = std::move(actions_i);
  s.actions_j = std::move(actions_j);
  if (s.states_k.empty() || s.states_l.empty() || s.actions_i.empty() ||
      s.actions_j.empty()) {
    fail(ErrorCode::kValidation, "states and actions must be nonempty");
  }
  size_t want = static_cast<size_t>(s.K()) * s.L() * s.I() * s.J();
  if (payoff.size() != want) {
    fail(ErrorCode::kValidation,
         "payoff tensor has " + std::to_string(payoff.size()) +
             " entries, expected " + std::to_string(want));
  }
  for (size_t i = 0; i < payoff.size(); ++i) {
    if (!(payoff[i] >= -1.0 && payoff[i] <= 1.0)) {
      fail(ErrorCode::kValidation, "payoff entry " + std::to_string(i) +
                                       " outside [-1,1]: " +
                                       format_double(payoff[i]));
    }
  }
  s.payoff = std::move(payoff);
  if (mk.size() != s.K() || ml.size() != s.L()) {
    fail(ErrorCode::kValidation, "transition matrix size mismatch");
  }
  s.chain_k = analyze_chain(mk, /*allow_transient=*/false);
  s.chain_l = analyze_chain(ml, /*allow_transient=*/false);
  if (s.chain_k.period > 1 || s.chain_l.period > 1) {
    fail(ErrorCode::kPeriodicChain,
         "chain has period " +
             std::to_string(std::max(s.chain_k.period, s.chain_l.period)) +
             "; periodic chains are not supported, take the period-power of "
             "the matrix and restate the game in stage blocks");
  }
  s.p0 = validate_belief(p0, "p0");
  s.q0 = validate_belief(q0, "q0");
  if (static_cast<int>(s.p0.size()) != s.K() ||
      static_cast<int>(s.q0.size()) != s.L()) {
    fail(ErrorCode::kValidation, "prior length does not match state count");
  }
  return s;
}

GameSpec transpose_game(const GameSpec& spec) {
  std::vector<double> payoff(spec.payoff.size());
  int K = spec.K(), L = spec.L(), I = spec.I(), J = spec.J();
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < J; ++j) {
        for (int i = 0; i < I; ++i) {
          payoff[((static_cast<size_t>(l) * K + k) * J + j) * I + i] =
              -spec.g(k, l, i, j);
        }
      }
    }
  }
  return GameSpec::create(spec.states_l, spec.states_k, spec.actions_j,
                          spec.actions_i, std::move(payoff),
                          StochasticMatrix(spec.chain_l.matrix),
                          StochasticMatrix(spec.chain_k.matrix), spec.q0,
                          spec.p0);
}

BehavioralAction BehavioralAction::uniform(int states, int actions) {
  BehavioralAction x;
  x.rows = Matrix(states, actions, 1.0 / actions);
  return x;
}

BehavioralAction BehavioralAction::from_flat(const Vec& flat, int states,
                                             int actions) {
  if (static_cast<int>(flat.size()) != states * actions) {
    fail(ErrorCode::kBadArgument, "behavioral action length mismatch");
  }
  BehavioralAction x;
  x.rows = Matrix(states, actions);
  for (int k = 0; k < states; ++k) {
    for (int i = 0; i < actions; ++i) {
      x.rows.at(k, i) = flat[static_cast<size_t>(k) * actions + i];
    }
  }
  return x;
}

Vec BehavioralAction::flat() const {
  return rows.data();
}

double stage_payoff(const GameSpec& spec, const Vec& p, const Vec& q,
                    const BehavioralAction& x, const BehavioralAction& y) {
  double total = 0.0;
  for (int k = 0; k < spec.K(); ++k) {
    if (p[k] == 0.0) continue;
    for (int l = 0; l < spec.L(); ++l) {
      double w = p[k] * q[l];
      if (w == 0.0) continue;
      double cell = 0.0;
      for (int i = 0; i < spec.I(); ++i) {
        double xi = x.rows.at(k, i);
        if (xi == 0.0) continue;
        for (int j = 0; j < spec.J(); ++j) {
          cell += xi * y.rows.at(l, j) * spec.g(k, l, i, j);
        }
      }
      total += w * cell;
    }
  }
  return total;
}

Vec action_marginal(const Vec& p, const BehavioralAction& x) {
  Vec m(x.actions(), 0.0);
  for (int k = 0; k < x.states(); ++k) {
    if (p[k] == 0.0) continue;
    for (int i = 0; i < x.actions(); ++i) m[i] += p[k] * x.rows.at(k, i);
  }
  return m;
}

Vec bayes_posterior(const Vec& p, const BehavioralAction& x, int action) {
  double mass = 0.0;
  Vec post(p.size());
  for (int k = 0; k < x.states(); ++k) {
    post[k] = p[k] * x.rows.at(k, action);
    mass += post[k];
  }
  if (mass <= 1e-12) return p;  // unobservable action: keep the prior
  for (double& v : post) v /= mass;
  return post;
}

Vec advance(const Vec& p, const Matrix& m) { return vec_mat(p, m); }

}  // namespace mcgs
