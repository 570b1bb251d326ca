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

#include "mcgs/mcgs.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mcgs/mz.hpp"
#include "mcgs/nonrevealing.hpp"
#include "mcgs/serialize.hpp"
#include "mcgs/shapley.hpp"
#include "mcgs/simulate.hpp"
#include "mcgs/verify.hpp"

struct mcgs_game {
  mcgs::GameFile file;
  mcgs::GameSpec spec;
};

namespace {

thread_local std::string g_last_error;

mcgs_status status_from(mcgs::ErrorCode code) {
  using mcgs::ErrorCode;
  switch (code) {
    case ErrorCode::kParse: return MCGS_ERR_PARSE;
    case ErrorCode::kValidation: return MCGS_ERR_VALIDATION;
    case ErrorCode::kNotStochastic: return MCGS_ERR_NOT_STOCHASTIC;
    case ErrorCode::kTransientState: return MCGS_ERR_TRANSIENT_STATE;
    case ErrorCode::kPeriodicChain: return MCGS_ERR_PERIODIC_CHAIN;
    case ErrorCode::kLpFailure: return MCGS_ERR_LP_FAILURE;
    case ErrorCode::kInfeasible: return MCGS_ERR_INFEASIBLE;
    case ErrorCode::kUnbounded: return MCGS_ERR_UNBOUNDED;
    case ErrorCode::kToleranceNotReached: return MCGS_ERR_TOLERANCE;
    case ErrorCode::kNotConverged: return MCGS_ERR_NOT_CONVERGED;
    case ErrorCode::kPreconditionViolated: return MCGS_ERR_PRECONDITION;
    case ErrorCode::kBadArgument: return MCGS_ERR_BAD_ARGUMENT;
    case ErrorCode::kIo: return MCGS_ERR_IO;
    case ErrorCode::kInternal: return MCGS_ERR_INTERNAL;
  }
  return MCGS_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs the body under the error contract: exceptions become status codes
// plus a thread-local message, success clears the message.
template <typename Fn>
mcgs_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const mcgs::Error& err) {
    g_last_error = err.what();
    return status_from(err.code());
  } catch (const std::exception& err) {
    g_last_error = err.what();
    return MCGS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MCGS_ERR_INTERNAL;
  }
}

void require_out(void* out) {
  if (out == nullptr) {
    mcgs::fail(mcgs::ErrorCode::kBadArgument, "output pointer is null");
  }
}

void require_game(const mcgs_game* game) {
  if (game == nullptr) {
    mcgs::fail(mcgs::ErrorCode::kBadArgument, "game handle is null");
  }
}

void require_run(int horizon, int resolution, double tol) {
  if (horizon < 1 || resolution < 2 || !(tol > 0.0)) {
    mcgs::fail(mcgs::ErrorCode::kBadArgument,
               "need horizon >= 1, resolution >= 2, tol > 0");
  }
}

// Class-mass coordinate labels: member state names joined by '+'.
std::vector<std::string> class_labels(const mcgs::ChainAnalysis& analysis,
                                      const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& cls : analysis.classes) {
    std::string label;
    for (size_t i = 0; i < cls.size(); ++i) {
      if (i) label += "+";
      label += names[cls[i]];
    }
    out.push_back(label);
  }
  return out;
}

std::string comment(const std::string& key, const std::string& value) {
  return "# " + key + "," + value + "\n";
}

std::string comment(const std::string& key, double value) {
  return comment(key, mcgs::format_double(value));
}

std::string comment(const std::string& key, int value) {
  return comment(key, std::to_string(value));
}

// Shared pipeline piece for the limit commands: concealing-value limit by
// horizon doubling. The doubling stop is coarser than the per-stage saddle
// tolerance, which mostly controls table quality.
mcgs::NrLimit limit_pipeline(const mcgs::GameSpec& spec, int resolution,
                             double tol, int max_horizon) {
  double limit_tol = std::max(100.0 * tol, 1e-3);
  return mcgs::estimate_vhat_limit(spec, resolution, limit_tol, max_horizon,
                                   tol);
}

std::string limit_comments(const mcgs::NrLimit& limit) {
  std::string out;
  out += comment("horizon", limit.horizon);
  out += comment("increment", limit.increment);
  out += comment("balanced_residual", limit.balanced_residual);
  out += comment("error_bound", limit.error_bound);
  out += comment("converged", limit.converged ? 1 : 0);
  return out;
}

}  // namespace

extern "C" {

const char* mcgs_status_name(int status) {
  switch (status) {
    case MCGS_OK: return "ok";
    case MCGS_ERR_PARSE: return "parse";
    case MCGS_ERR_VALIDATION: return "validation";
    case MCGS_ERR_NOT_STOCHASTIC: return "not-stochastic";
    case MCGS_ERR_TRANSIENT_STATE: return "transient-state";
    case MCGS_ERR_PERIODIC_CHAIN: return "periodic-chain";
    case MCGS_ERR_LP_FAILURE: return "lp-failure";
    case MCGS_ERR_INFEASIBLE: return "infeasible";
    case MCGS_ERR_UNBOUNDED: return "unbounded";
    case MCGS_ERR_TOLERANCE: return "tolerance-not-reached";
    case MCGS_ERR_NOT_CONVERGED: return "not-converged";
    case MCGS_ERR_PRECONDITION: return "precondition-violated";
    case MCGS_ERR_BAD_ARGUMENT: return "bad-argument";
    case MCGS_ERR_IO: return "io";
    case MCGS_ERR_INTERNAL: return "internal";
    default: return "unknown";
  }
}

const char* mcgs_last_error(void) { return g_last_error.c_str(); }

void mcgs_string_free(char* text) { std::free(text); }

mcgs_status mcgs_game_parse(const char* json_text, mcgs_game** out) {
  return guarded([&]() {
    require_out(out);
    if (json_text == nullptr) {
      mcgs::fail(mcgs::ErrorCode::kBadArgument, "game text is null");
    }
    auto game = std::make_unique<mcgs_game>();
    game->file = mcgs::parse_game_text(json_text);
    game->spec = game->file.to_spec();
    *out = game.release();
    return MCGS_OK;
  });
}

mcgs_status mcgs_game_load(const char* path, mcgs_game** out) {
  return guarded([&]() {
    require_out(out);
    if (path == nullptr) {
      mcgs::fail(mcgs::ErrorCode::kBadArgument, "path is null");
    }
    auto game = std::make_unique<mcgs_game>();
    game->file = mcgs::load_game_file(path);
    game->spec = game->file.to_spec();
    *out = game.release();
    return MCGS_OK;
  });
}

void mcgs_game_free(mcgs_game* game) { delete game; }

int mcgs_game_states_k(const mcgs_game* game) {
  return game ? game->spec.K() : 0;
}
int mcgs_game_states_l(const mcgs_game* game) {
  return game ? game->spec.L() : 0;
}
int mcgs_game_actions_i(const mcgs_game* game) {
  return game ? game->spec.I() : 0;
}
int mcgs_game_actions_j(const mcgs_game* game) {
  return game ? game->spec.J() : 0;
}

mcgs_status mcgs_chain_report(const char* json_text, char** out) {
  return guarded([&]() {
    require_out(out);
    if (json_text == nullptr) {
      mcgs::fail(mcgs::ErrorCode::kBadArgument, "game text is null");
    }
    mcgs::GameFile file = mcgs::parse_game_text(json_text);
    mcgs::ChainAnalysis ak = mcgs::analyze_chain(
        mcgs::StochasticMatrix(file.transition_k), /*allow_transient=*/true);
    mcgs::ChainAnalysis al = mcgs::analyze_chain(
        mcgs::StochasticMatrix(file.transition_l), /*allow_transient=*/true);
    std::string report =
        mcgs::chain_report(ak, file.states_k, "row-player chain") +
        mcgs::chain_report(al, file.states_l, "column-player chain");
    *out = dup_string(report);
    return MCGS_OK;
  });
}

mcgs_status mcgs_value_csv(const mcgs_game* game, int horizon, int resolution,
                           double tol, char** out) {
  return guarded([&]() {
    require_game(game);
    require_out(out);
    require_run(horizon, resolution, tol);
    std::vector<mcgs::ValueTable> v =
        mcgs::compute_v(game->spec, horizon, resolution, tol);
    std::string text = comment("table", "value") + comment("horizon", horizon)
                       + comment("resolution", resolution);
    text += mcgs::value_table_csv(v.back(), game->file.states_k,
                                  game->file.states_l);
    *out = dup_string(text);
    return MCGS_OK;
  });
}

mcgs_status mcgs_nrvalue_csv(const mcgs_game* game, int horizon,
                             int resolution, double tol, char** out) {
  return guarded([&]() {
    require_game(game);
    require_out(out);
    require_run(horizon, resolution, tol);
    std::vector<mcgs::ValueTable> vhat =
        mcgs::compute_vhat(game->spec, horizon, resolution, tol);
    std::string text = comment("table", "concealed-value")
                       + comment("horizon", horizon)
                       + comment("resolution", resolution);
    text += mcgs::value_table_csv(vhat.back(), game->file.states_k,
                                  game->file.states_l);
    *out = dup_string(text);
    return MCGS_OK;
  });
}

mcgs_status mcgs_vhat_limit_csv(const mcgs_game* game, int resolution,
                                double tol, int max_horizon, char** out) {
  return guarded([&]() {
    require_game(game);
    require_out(out);
    require_run(max_horizon, resolution, tol);
    mcgs::NrLimit limit =
        limit_pipeline(game->spec, resolution, tol, max_horizon);
    std::string text = comment("table", "concealed-value-limit");
    text += limit_comments(limit);
    text += mcgs::value_table_csv(
        limit.reduced, class_labels(game->spec.chain_k, game->file.states_k),
        class_labels(game->spec.chain_l, game->file.states_l));
    *out = dup_string(text);
    return MCGS_OK;
  });
}

mcgs_status mcgs_mz_csv(const mcgs_game* game, int resolution, double tol,
                        int max_horizon, char** out) {
  return guarded([&]() {
    require_game(game);
    require_out(out);
    require_run(max_horizon, resolution, tol);
    mcgs::NrLimit limit =
        limit_pipeline(game->spec, resolution, tol, max_horizon);
    mcgs::MzResult mz =
        mcgs::mz_fixed_point(limit.reduced, std::max(tol, 1e-8), 300);
    std::string text = comment("table", "limit-value");
    text += limit_comments(limit);
    text += comment("residual_vex", mz.residual_vex);
    text += comment("residual_cav", mz.residual_cav);
    text += comment("iterations", mz.iterations);
    text += comment("fixed_point_converged", mz.converged ? 1 : 0);
    text += mcgs::value_table_csv(
        mz.w, class_labels(game->spec.chain_k, game->file.states_k),
        class_labels(game->spec.chain_l, game->file.states_l));
    *out = dup_string(text);
    return MCGS_OK;
  });
}

mcgs_status mcgs_solve_csv(const mcgs_game* game, int horizon, int resolution,
                           double tol, char** out) {
  return guarded([&]() {
    require_game(game);
    require_out(out);
    require_run(horizon, resolution, tol);
    std::vector<mcgs::ValueTable> v =
        mcgs::compute_v(game->spec, horizon, resolution, tol);
    mcgs::NrLimit limit =
        limit_pipeline(game->spec, resolution, tol, horizon);
    mcgs::MzResult mz =
        mcgs::mz_fixed_point(limit.reduced, std::max(tol, 1e-8), 300);
    mcgs::ValueTable lifted =
        mcgs::balanced_lift(mz.w, game->spec.chain_k, game->spec.chain_l,
                            v.back().grid_ptr());
    const mcgs::PairGrid& grid = v.back().grid();
    double gap = 0.0;
    std::string rows;
    for (int pi = 0; pi < grid.p.size(); ++pi) {
      std::string prefix;
      for (double x : grid.p.point(pi)) {
        prefix += mcgs::format_double(x) + ",";
      }
      for (int qi = 0; qi < grid.q.size(); ++qi) {
        double a = v.back().at(pi, qi);
        double b = lifted.at(pi, qi);
        gap = std::max(gap, std::fabs(a - b));
        rows += prefix;
        for (double x : grid.q.point(qi)) {
          rows += mcgs::format_double(x) + ",";
        }
        rows += mcgs::format_double(a) + "," + mcgs::format_double(b) + "," +
                mcgs::format_double(std::fabs(a - b)) + "\n";
      }
    }
    std::string text = comment("table", "solve");
    text += comment("horizon", horizon);
    text += comment("resolution", resolution);
    text += limit_comments(limit);
    text += comment("residual_vex", mz.residual_vex);
    text += comment("residual_cav", mz.residual_cav);
    text += comment("sup_gap", gap);
    for (const std::string& n : game->file.states_k) text += "p:" + n + ",";
    for (const std::string& n : game->file.states_l) text += "q:" + n + ",";
    text += "value,limit,gap\n" + rows;
    *out = dup_string(text);
    return MCGS_OK;
  });
}

mcgs_status mcgs_simulate_csv(const mcgs_game* game, int blocks,
                              int block_len, int runs, double epsilon,
                              int resolution, double tol, uint64_t seed,
                              char** out) {
  return guarded([&]() {
    require_game(game);
    require_out(out);
    require_run(blocks, resolution, tol);
    if (block_len < 1 || runs < 1) {
      mcgs::fail(mcgs::ErrorCode::kBadArgument,
                 "need block_len >= 1 and runs >= 1");
    }
    const mcgs::GameSpec& spec = game->spec;
    mcgs::NrLimit limit = limit_pipeline(spec, resolution, tol, 16);
    mcgs::MzResult mz =
        mcgs::mz_fixed_point(limit.reduced, std::max(tol, 1e-8), 300);
    mcgs::ValueTable w = mcgs::balanced_lift(mz.w, spec.chain_k, spec.chain_l,
                                             limit.full.grid_ptr());

    mcgs::BlockStrategyConfig config(w);
    config.vhat = &limit;
    config.vhat_stage =
        std::make_shared<const std::vector<mcgs::ValueTable>>(
            mcgs::compute_vhat(spec, block_len, resolution, tol));
    config.t0 = block_len;
    config.epsilon = epsilon;
    config.split_tol = 1e-3 + 2.0 * w.interp_error();
    config.opponent_model = mcgs::single_kernel_strategy(
        mcgs::uniform_kernel(spec.L(), spec.J()), spec.q0);
    mcgs::Strategy sigma = mcgs::block_strategy(spec, config);
    mcgs::Strategy tau = mcgs::single_kernel_strategy(
        mcgs::uniform_kernel(spec.L(), spec.J()), spec.q0);

    mcgs::SimulationStats stats =
        mcgs::simulate(spec, sigma, tau, blocks * block_len, runs, seed);
    mcgs::MartingaleReport diag = mcgs::martingale_diagnostics(stats.records);

    std::string text = "metric,value\n";
    auto row = [&text](const std::string& key, double value) {
      text += key + "," + mcgs::format_double(value) + "\n";
    };
    row("blocks", blocks);
    row("block_len", block_len);
    row("stages", blocks * block_len);
    row("runs", runs);
    row("epsilon", epsilon);
    row("mean_payoff", stats.mean);
    row("std_error", stats.std_error);
    row("certificate_value", w.eval(spec.p0, spec.q0));
    row("certificate_error", w.interp_error() + limit.error_bound);
    row("variation_p", diag.variation_p);
    row("variation_se_p", diag.variation_se_p);
    row("variation_bound_p", diag.bound_p);
    row("variation_q", diag.variation_q);
    row("variation_se_q", diag.variation_se_q);
    row("variation_bound_q", diag.bound_q);
    row("max_abs_z", diag.max_abs_z);
    row("within_bounds", diag.within_bounds ? 1.0 : 0.0);
    *out = dup_string(text);
    return MCGS_OK;
  });
}

mcgs_status mcgs_verify_csv(const mcgs_game* game, int horizon,
                            int resolution, double tol, uint64_t seed,
                            int* failures, char** out) {
  return guarded([&]() {
    require_game(game);
    require_out(out);
    mcgs::VerifyConfig config;
    config.horizon = horizon;
    config.resolution = resolution;
    config.tol = tol;
    config.seed = seed;
    mcgs::VerifyReport report = mcgs::run_verification(game->spec, config);
    if (failures != nullptr) *failures = report.failures();
    *out = dup_string(mcgs::verify_csv(report));
    return MCGS_OK;
  });
}

}  // extern "C"
