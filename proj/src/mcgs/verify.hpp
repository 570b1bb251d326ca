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

#ifndef MCGS_VERIFY_HPP_
#define MCGS_VERIFY_HPP_

#include <string>
#include <vector>

#include "mcgs/game.hpp"

namespace mcgs {

// One named invariant check: pass iff residual <= bound (and the residual
// is finite). Checks with per-instance bounds report the worst excess over
// their bound and compare it against zero.
struct VerifyCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double bound = 0.0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool all_pass() const;
  int failures() const;
};

struct VerifyConfig {
  int horizon = 3;     // recursion depth for the table-level checks
  int resolution = 4;  // belief grid resolution
  double tol = 1e-6;   // per-stage saddle tolerance
  uint64_t seed = 1;
  int samples = 50;    // draws per randomized check
};

// Runs every module's invariant suite against the given game: chain
// structure, grid interpolation, matrix-game duality, value-recursion
// bounds and shape, concealed-value regularity, envelope and fixed-point
// identities, simplex transport, and simulator exactness. Deterministic:
// equal (spec, config) produce identical reports.
VerifyReport run_verification(const GameSpec& spec, const VerifyConfig& config);

// CSV rows `check,status,residual,bound`, byte-stable for equal reports.
std::string verify_csv(const VerifyReport& report);

}  // namespace mcgs

#endif  // MCGS_VERIFY_HPP_
