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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "mcgs/serialize.hpp"

namespace mcgs {
namespace {

// Two mixing 2-state chains, matching-pennies style payoff struck by the
// row-player state.
const char* kSmallGame = R"({
  "states_k": ["hot", "cold"],
  "states_l": ["x"],
  "actions_i": ["a", "b"],
  "actions_j": ["left", "right"],
  "payoff": [
    [[["1", "-1"], ["-1", "1"]]],
    [[["-1", "1"], ["1", "-1"]]]
  ],
  "transition_k": [["2/3", "1/3"], ["1/3", "2/3"]],
  "transition_l": [["1"]],
  "p0": ["0.5", "0.5"],
  "q0": ["1"]
})";

std::string patched(const std::string& base, const std::string& from,
                    const std::string& to) {
  std::string out = base;
  size_t pos = out.find(from);
  REQUIRE(pos != std::string::npos);
  out.replace(pos, from.size(), to);
  return out;
}

TEST_SUITE_BEGIN("serialize");

TEST_CASE("numeric strings parse exactly, ratios included") {
  CHECK(parse_number_text("0.25", "f") == 0.25);
  CHECK(parse_number_text("-1", "f") == -1.0);
  CHECK(parse_number_text("1e-3", "f") == 1e-3);
  CHECK(parse_number_text(" 2/3 ", "f") == 2.0 / 3.0);
  CHECK(parse_number_text("-1/4", "f") == -0.25);
  CHECK_THROWS_WITH_AS(parse_number_text("", "f"),
                       doctest::Contains("empty"), Error);
  CHECK_THROWS_WITH_AS(parse_number_text("1/0", "f"),
                       doctest::Contains("malformed ratio"), Error);
  CHECK_THROWS_WITH_AS(parse_number_text("1.5x", "f"),
                       doctest::Contains("malformed number"), Error);
  CHECK_THROWS_WITH_AS(parse_number_text("2//3", "f"),
                       doctest::Contains("malformed ratio"), Error);
}

TEST_CASE("a well-formed game file loads with exact entries") {
  GameFile g = parse_game_text(kSmallGame);
  CHECK(g.states_k == std::vector<std::string>{"hot", "cold"});
  CHECK(g.actions_j == std::vector<std::string>{"left", "right"});
  CHECK(g.transition_k.at(0, 0) == 2.0 / 3.0);
  CHECK(g.transition_l.at(0, 0) == 1.0);
  CHECK(g.p0 == Vec{0.5, 0.5});

  GameSpec spec = g.to_spec();
  CHECK(spec.K() == 2);
  CHECK(spec.L() == 1);
  CHECK(spec.g(0, 0, 0, 0) == 1.0);
  CHECK(spec.g(1, 0, 0, 0) == -1.0);
  CHECK(spec.chain_k.num_classes() == 1);
}

TEST_CASE("plain JSON numbers are accepted alongside strings") {
  GameFile g = parse_game_text(
      patched(kSmallGame, "[\"0.5\", \"0.5\"]", "[0.5, 0.5]"));
  CHECK(g.p0 == Vec{0.5, 0.5});
}

TEST_CASE("structural problems name the offending field") {
  CHECK_THROWS_WITH_AS(parse_game_text("{"),
                       doctest::Contains("not valid JSON"), Error);
  CHECK_THROWS_WITH_AS(parse_game_text("[1,2]"),
                       doctest::Contains("JSON object"), Error);

  std::string missing = patched(kSmallGame, "\"q0\": [\"1\"]", "\"q0x\": 1");
  CHECK_THROWS_WITH_AS(parse_game_text(missing),
                       doctest::Contains("unknown field 'q0x'"), Error);

  try {
    parse_game_text(patched(kSmallGame, "\"-1\", \"1\"], [\"1\"",
                            "\"-1\", \"1.5\"], [\"1\""));
    FAIL("out-of-range payoff accepted");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kValidation);
    CHECK(std::string(err.what()).find("payoff[1][0][0][1]") !=
          std::string::npos);
    CHECK(std::string(err.what()).find("outside [-1,1]") !=
          std::string::npos);
  }

  try {
    parse_game_text(patched(kSmallGame, "\"2/3\", \"1/3\"", "\"2/3\", \"0.2\""));
    FAIL("defective row accepted");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kNotStochastic);
    CHECK(std::string(err.what()).find("transition_k[0]") !=
          std::string::npos);
  }

  try {
    parse_game_text(patched(kSmallGame, "\"0.5\", \"0.5\"", "\"0.7\", \"0.5\""));
    FAIL("defective prior accepted");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kValidation);
    CHECK(std::string(err.what()).find("p0") != std::string::npos);
  }
}

TEST_CASE("periodic chains are rejected at spec construction, with the "
          "period named") {
  std::string periodic = patched(
      kSmallGame, "[\"2/3\", \"1/3\"], [\"1/3\", \"2/3\"]",
      "[\"0\", \"1\"], [\"1\", \"0\"]");
  GameFile g = parse_game_text(periodic);  // ingest itself succeeds
  try {
    g.to_spec();
    FAIL("periodic chain accepted");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kPeriodicChain);
    CHECK(std::string(err.what()).find("period 2") != std::string::npos);
  }
  // The structural query still works on the raw file.
  ChainAnalysis a = analyze_chain(StochasticMatrix(g.transition_k));
  CHECK(a.period == 2);
}

TEST_CASE("table CSV carries coordinates, values, and the certificate") {
  PairGridPtr grid = make_pair_grid(2, 1, 2);
  ValueTable t(grid, 1.0, 0.0);
  t.at(0, 0) = -0.5;
  t.at(1, 0) = 0.25;
  t.at(2, 0) = 1.0;
  t.set_solver_gap(0.125);
  std::string csv = value_table_csv(t, {"hot", "cold"}, {"x"});
  CHECK(csv.find("p:hot,p:cold,q:x,value,error\n") == 0);
  CHECK(csv.find("\n0,1,1,-0.5,") != std::string::npos);
  CHECK(csv.find("\n0.5,0.5,1,0.25,") != std::string::npos);
  CHECK(csv.find("\n1,0,1,1,") != std::string::npos);
  // Byte-stable across repeated renderings.
  CHECK(csv == value_table_csv(t, {"hot", "cold"}, {"x"}));
  // Three data rows plus the header.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("chain report names classes, measures, and the projection") {
  GameFile g = parse_game_text(kSmallGame);
  ChainAnalysis a = analyze_chain(StochasticMatrix(g.transition_k));
  std::string report = chain_report(a, g.states_k, "row-player chain");
  CHECK(report.find("row-player chain: 2 states, 1 recurrent class, period 1")
        != std::string::npos);
  CHECK(report.find("{hot, cold}") != std::string::npos);
  // The measure is solved numerically; match the leading digits only.
  CHECK(report.find("invariant measure (0.5, 0.49999999") !=
        std::string::npos);
  CHECK(report.find("from hot: (0.5, 0.49999999") != std::string::npos);
  CHECK(report.find("long-run projection:") != std::string::npos);
}

TEST_CASE("content hash is stable and input sensitive") {
  CHECK(content_hash("") == "cbf29ce484222325");
  CHECK(content_hash("a") == content_hash("a"));
  CHECK(content_hash("a") != content_hash("b"));
  CHECK(content_hash("a").size() == 16);
}

TEST_CASE("cache round-trips artifacts byte for byte") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "mcgs_cache_test";
  fs::remove_all(dir);

  ResultCache off("");
  CHECK_FALSE(off.enabled());
  CHECK_FALSE(off.lookup("k").has_value());

  ResultCache cache(dir.string());
  CHECK(cache.enabled());
  std::string key = content_hash("game-bytes+config");
  CHECK_FALSE(cache.lookup(key).has_value());
  std::string artifact = "check,status\nfoo,pass\n";
  cache.store(key, artifact);
  auto hit = cache.lookup(key);
  REQUIRE(hit.has_value());
  CHECK(*hit == artifact);
  // No stray temp files once the write has landed.
  int entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
  fs::remove_all(dir);
}

TEST_CASE("default cache directory follows the environment") {
  const char* old = std::getenv("MCGS_CACHE_DIR");
  std::string saved = old ? old : "";
  ::setenv("MCGS_CACHE_DIR", "/tmp/mcgs-env-cache", 1);
  CHECK(default_cache_dir() == "/tmp/mcgs-env-cache");
  ::unsetenv("MCGS_CACHE_DIR");
  CHECK(default_cache_dir().empty());
  if (old) ::setenv("MCGS_CACHE_DIR", saved.c_str(), 1);
}

TEST_CASE("atomic writes land complete or not at all") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "mcgs_atomic_test";
  fs::remove_all(dir);
  std::string target = (dir / "nested" / "artifact.csv").string();
  write_file_atomic(target, "payload");
  CHECK(read_file(target) == "payload");
  write_file_atomic(target, "replaced");
  CHECK(read_file(target) == "replaced");
  CHECK_THROWS_AS(read_file((dir / "missing").string()), Error);
  fs::remove_all(dir);
}

TEST_SUITE_END();

}  // namespace
}  // namespace mcgs
