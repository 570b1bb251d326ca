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

#include <string>

#include "doctest.h"
#include "mcgs/serialize.hpp"
#include "mcgs/verify.hpp"

namespace mcgs {
namespace {

GameSpec small_game() {
  const char* text = R"({
    "states_k": ["g", "h"],
    "states_l": ["u", "v"],
    "actions_i": ["a", "b"],
    "actions_j": ["c", "d"],
    "payoff": [
      [[["0.8", "-0.4"], ["-0.6", "0.2"]],
       [["-0.3", "0.5"], ["0.7", "-0.9"]]],
      [[["-0.5", "0.3"], ["0.4", "-0.2"]],
       [["0.6", "-0.7"], ["-0.8", "0.1"]]]
    ],
    "transition_k": [["0.7", "0.3"], ["0.4", "0.6"]],
    "transition_l": [["0.5", "0.5"], ["0.2", "0.8"]],
    "p0": ["0.5", "0.5"],
    "q0": ["0.6", "0.4"]
  })";
  return parse_game_text(text).to_spec();
}

TEST_SUITE_BEGIN("verify");

TEST_CASE("the battery passes on a healthy game and reports every module") {
  GameSpec spec = small_game();
  VerifyConfig cfg;
  cfg.horizon = 2;
  cfg.resolution = 3;
  cfg.samples = 12;
  VerifyReport report = run_verification(spec, cfg);

  for (const VerifyCheck& c : report.checks) {
    INFO(c.name, ": residual ", c.residual, " bound ", c.bound);
    CHECK(c.pass);
  }
  CHECK(report.all_pass());
  CHECK(report.failures() == 0);

  std::string csv = verify_csv(report);
  CHECK(csv.find("check,status,residual,bound\n") == 0);
  for (const char* module :
       {"chain.", "grid.", "matrix-game.", "value.", "nr.", "mz.",
        "transport.", "simulate.", "serialize."}) {
    INFO("module ", module);
    CHECK(csv.find(module) != std::string::npos);
  }
  CHECK(csv.find(",FAIL,") == std::string::npos);
}

TEST_CASE("equal seeds render byte-identical reports") {
  GameSpec spec = small_game();
  VerifyConfig cfg;
  cfg.horizon = 2;
  cfg.resolution = 3;
  cfg.samples = 8;
  cfg.seed = 42;
  std::string first = verify_csv(run_verification(spec, cfg));
  std::string second = verify_csv(run_verification(spec, cfg));
  CHECK(first == second);

  cfg.seed = 43;
  std::string third = verify_csv(run_verification(spec, cfg));
  // Different draws, same verdicts: every row still passes.
  CHECK(third.find(",FAIL,") == std::string::npos);
}

TEST_CASE("defective configurations are rejected") {
  GameSpec spec = small_game();
  VerifyConfig cfg;
  cfg.horizon = 0;
  CHECK_THROWS_AS(run_verification(spec, cfg), Error);
  cfg.horizon = 2;
  cfg.resolution = 1;
  CHECK_THROWS_AS(run_verification(spec, cfg), Error);
  cfg.resolution = 3;
  cfg.tol = 0.0;
  CHECK_THROWS_AS(run_verification(spec, cfg), Error);
}

TEST_SUITE_END();

}  // namespace
}  // namespace mcgs
