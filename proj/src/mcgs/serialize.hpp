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

#ifndef MCGS_SERIALIZE_HPP_
#define MCGS_SERIALIZE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "mcgs/game.hpp"
#include "mcgs/nonrevealing.hpp"
#include "mcgs/simplex_grid.hpp"

namespace mcgs {

// Numeric literal from a game file: a decimal string ("0.25", "-1", "1e-3")
// or an integer ratio ("2/3", "-1/4"). Ratios avoid decimal round-off in
// hand-written fixtures. `field` names the value in error messages.
double parse_number_text(const std::string& text, const std::string& field);

// Raw contents of a game file, validated shallowly (shapes, ranges, row
// sums) but with the chains not yet analyzed. `analyze-chain` style queries
// work on this form even when a chain is periodic; to_spec() enforces the
// full recurrent-aperiodic contract.
struct GameFile {
  std::vector<std::string> states_k, states_l, actions_i, actions_j;
  std::vector<double> payoff;  // [K][L][I][J], row-major
  Matrix transition_k, transition_l;
  Vec p0, q0;

  GameSpec to_spec() const;
};

// Parses the JSON-syntax game document. Required fields: states_k, states_l,
// actions_i, actions_j, payoff [K][L][I][J], transition_k, transition_l,
// p0, q0. All numbers may be written as strings (decimal or "a/b").
GameFile parse_game_text(const std::string& text);
GameFile load_game_file(const std::string& path);

std::string read_file(const std::string& path);

// Writes via a temp file in the target directory plus rename, so readers
// never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& data);

// Table as CSV: one row per grid point, belief coordinates first (p then
// q), then the value, then the certified error (interpolation plus solver
// gap). Byte-stable: fixed column order, shortest round-trip numerals.
std::string value_table_csv(const ValueTable& table,
                            const std::vector<std::string>& p_names,
                            const std::vector<std::string>& q_names);

// Human-readable decomposition of one chain: classes, periods, invariant
// measures, and the long-run projection matrix.
std::string chain_report(const ChainAnalysis& analysis,
                         const std::vector<std::string>& names,
                         const std::string& label);

// 64-bit FNV-1a content hash, rendered as 16 hex digits.
std::string content_hash(const std::string& data);

// Filesystem cache of command outputs keyed by content hash. An empty
// directory disables caching. Writes are atomic; concurrent readers see
// either nothing or the full artifact.
class ResultCache {
 public:
  explicit ResultCache(std::string dir);

  bool enabled() const { return !dir_.empty(); }
  std::optional<std::string> lookup(const std::string& key) const;
  void store(const std::string& key, const std::string& value) const;
  std::string path_for(const std::string& key) const;

 private:
  std::string dir_;
};

// Cache directory from the MCGS_CACHE_DIR environment variable; empty when
// unset (caching off by default).
std::string default_cache_dir();

}  // namespace mcgs

#endif  // MCGS_SERIALIZE_HPP_
