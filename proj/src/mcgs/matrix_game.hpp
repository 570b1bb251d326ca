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

#ifndef MCGS_MATRIX_GAME_HPP_
#define MCGS_MATRIX_GAME_HPP_

#include "mcgs/common.hpp"

namespace mcgs {

struct MatrixGameSolution {
  double value = 0.0;
  Vec row_strategy;  // maximizer mixes over rows
  Vec col_strategy;  // minimizer mixes over columns
  double gap = 0.0;  // best-response regret of the returned pair
};

// Value and optimal mixed strategies of the zero-sum game with payoff
// matrix a (row player maximizes). One simplex solve; the column player's
// strategy is read off the duals. Deterministic for identical inputs.
MatrixGameSolution solve_matrix_game(const Matrix& a);

}  // namespace mcgs

#endif  // MCGS_MATRIX_GAME_HPP_
