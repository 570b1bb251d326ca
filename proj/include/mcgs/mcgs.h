/* Copyright 2026 The mcgs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the repeated-game solver library.
 *
 * The library analyzes two-player zero-sum repeated games in which each
 * player privately tracks a state moving along its own finite Markov
 * chain. It computes finite-horizon values, information-concealing values
 * and their long-horizon limit, the paired concavification/convexification
 * fixed point that characterizes the limit value, and simulates the
 * block strategies that defend it.
 *
 * Conventions:
 *   - Every operation returns a status code; MCGS_OK is success.
 *   - On failure, mcgs_last_error() describes the problem (thread-local).
 *   - Game handles are opaque; free them with mcgs_game_free.
 *   - Returned strings are heap-allocated; free with mcgs_string_free.
 */

#ifndef MCGS_MCGS_H_
#define MCGS_MCGS_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcgs_status {
  MCGS_OK = 0,
  MCGS_ERR_PARSE = 1,
  MCGS_ERR_VALIDATION = 2,
  MCGS_ERR_NOT_STOCHASTIC = 3,
  MCGS_ERR_TRANSIENT_STATE = 4,
  MCGS_ERR_PERIODIC_CHAIN = 5,
  MCGS_ERR_LP_FAILURE = 6,
  MCGS_ERR_INFEASIBLE = 7,
  MCGS_ERR_UNBOUNDED = 8,
  MCGS_ERR_TOLERANCE = 9,
  MCGS_ERR_NOT_CONVERGED = 10,
  MCGS_ERR_PRECONDITION = 11,
  MCGS_ERR_BAD_ARGUMENT = 12,
  MCGS_ERR_IO = 13,
  MCGS_ERR_INTERNAL = 14
} mcgs_status;

/* Short stable name of a status code ("ok", "parse", ...). */
const char* mcgs_status_name(int status);

/* Message for the most recent failure on the calling thread. Never NULL;
 * empty when the last call succeeded. */
const char* mcgs_last_error(void);

/* Frees any string returned through a char** out parameter. */
void mcgs_string_free(char* text);

/* A validated game: state and action names, stage payoff in [-1,1],
 * one recurrent aperiodic chain per player, and the initial beliefs. */
typedef struct mcgs_game mcgs_game;

/* Parses and fully validates a JSON game document (see the repository
 * documentation for the format). */
mcgs_status mcgs_game_parse(const char* json_text, mcgs_game** out);
mcgs_status mcgs_game_load(const char* path, mcgs_game** out);
void mcgs_game_free(mcgs_game* game);

int mcgs_game_states_k(const mcgs_game* game);
int mcgs_game_states_l(const mcgs_game* game);
int mcgs_game_actions_i(const mcgs_game* game);
int mcgs_game_actions_j(const mcgs_game* game);

/* Structural report of both chains: recurrence classes, periods,
 * invariant measures, and long-run projections. Unlike game validation
 * this accepts periodic chains and transient states, so it can explain
 * exactly why a game was rejected. */
mcgs_status mcgs_chain_report(const char* json_text, char** out);

/* Finite-horizon value table v_T on the shared belief grid, as CSV
 * (belief coordinates, value, certified error). */
mcgs_status mcgs_value_csv(const mcgs_game* game, int horizon, int resolution,
                           double tol, char** out);

/* Same for the information-concealing value vhat_T, where both players
 * are restricted to play that keeps their recurrence-class posterior
 * fixed. */
mcgs_status mcgs_nrvalue_csv(const mcgs_game* game, int horizon,
                             int resolution, double tol, char** out);

/* Long-horizon limit of the concealing value on the class-mass domain,
 * found by horizon doubling. Leading '#' comment lines carry the reached
 * horizon, the last increment, the balance residual, the certified error
 * bound, and the convergence flag. */
mcgs_status mcgs_vhat_limit_csv(const mcgs_game* game, int resolution,
                                double tol, int max_horizon, char** out);

/* Fixed point of w = vex_II max(w, vhat) = cav_I min(w, vhat) on the
 * class-mass domain; this is the game's limit value. The concealing-value
 * limit is estimated first, doubling horizons up to max_horizon. Comment
 * lines carry both equation residuals and the iteration count. */
mcgs_status mcgs_mz_csv(const mcgs_game* game, int resolution, double tol,
                        int max_horizon, char** out);

/* End-to-end comparison: v_T against the lifted fixed point, reporting
 * the sup-norm gap. CSV columns: beliefs, v_T, limit, |difference|. */
mcgs_status mcgs_solve_csv(const mcgs_game* game, int horizon, int resolution,
                           double tol, char** out);

/* Monte Carlo runs of the constructive block strategy (row player)
 * against a uniform opponent, with posterior-martingale diagnostics.
 * `blocks` blocks of `block_len` stages each; with probability `epsilon`
 * per block the play is uniform. Output is metric,value CSV. */
mcgs_status mcgs_simulate_csv(const mcgs_game* game, int blocks,
                              int block_len, int runs, double epsilon,
                              int resolution, double tol, uint64_t seed,
                              char** out);

/* Full invariant battery over every module, as check,status,residual,
 * bound CSV. `failures` (optional) receives the number of failed checks.
 * Deterministic: equal inputs and seed give byte-identical output. */
mcgs_status mcgs_verify_csv(const mcgs_game* game, int horizon,
                            int resolution, double tol, uint64_t seed,
                            int* failures, char** out);

#ifdef __cplusplus
}
#endif

#endif /* MCGS_MCGS_H_ */
