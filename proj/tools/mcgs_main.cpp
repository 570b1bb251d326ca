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

// Batch front end over the shared library: loads a game document, runs one
// command, and emits CSV (or a text report) to --out or stdout. Results
// are cached by content hash of the game bytes plus the run parameters, so
// a cache hit replays the original bytes exactly.

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mcgs/mcgs.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

struct Options {
  std::string command;
  std::string game_path;
  int horizon = 8;
  int resolution = 8;
  double tol = 1e-3;
  uint64_t seed = 1;
  int runs = 200;
  std::string out_path;
  std::string cache_dir;
};

// Perturbation rate for the simulate command; it appears as a row of the
// output so runs are self-describing.
constexpr double kEpsilon = 0.05;

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return true;
}

// Temp-then-rename, so readers never observe partial bytes.
bool write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << bytes;
    out.flush();
    if (!out) return false;
  }
  fs::rename(tmp, target, ec);
  return !ec;
}

// The parameter half of the cache key. Only fields the command actually
// consumes participate, so e.g. --seed does not bust a `value` entry.
std::string canonical_config(const Options& opt) {
  char tol[32];
  std::snprintf(tol, sizeof(tol), "%.17g", opt.tol);
  std::string key = "command=" + opt.command;
  if (opt.command == "analyze-chain") return key;
  key += ";T=" + std::to_string(opt.horizon);
  key += ";resolution=" + std::to_string(opt.resolution);
  key += ";tol=" + std::string(tol);
  if (opt.command == "simulate" || opt.command == "verify") {
    key += ";seed=" + std::to_string(opt.seed);
  }
  if (opt.command == "simulate") {
    key += ";runs=" + std::to_string(opt.runs);
  }
  return key;
}

struct Game {
  mcgs_game* handle = nullptr;
  ~Game() { mcgs_game_free(handle); }
};

mcgs_status produce(const Options& opt, const std::string& game_text,
                    std::string* output) {
  char* text = nullptr;
  mcgs_status status;
  if (opt.command == "analyze-chain") {
    status = mcgs_chain_report(game_text.c_str(), &text);
  } else {
    Game game;
    status = mcgs_game_parse(game_text.c_str(), &game.handle);
    if (status != MCGS_OK) return status;
    if (opt.command == "value") {
      status = mcgs_value_csv(game.handle, opt.horizon, opt.resolution,
                              opt.tol, &text);
    } else if (opt.command == "nrvalue") {
      status = mcgs_nrvalue_csv(game.handle, opt.horizon, opt.resolution,
                                opt.tol, &text);
    } else if (opt.command == "vhat-limit") {
      status = mcgs_vhat_limit_csv(game.handle, opt.resolution, opt.tol,
                                   opt.horizon, &text);
    } else if (opt.command == "mz") {
      status = mcgs_mz_csv(game.handle, opt.resolution, opt.tol, opt.horizon,
                           &text);
    } else if (opt.command == "solve") {
      status = mcgs_solve_csv(game.handle, opt.horizon, opt.resolution,
                              opt.tol, &text);
    } else if (opt.command == "simulate") {
      status = mcgs_simulate_csv(game.handle, opt.horizon, /*block_len=*/1,
                                 opt.runs, kEpsilon, opt.resolution, opt.tol,
                                 opt.seed, &text);
    } else {  // verify; the command set was validated up front
      status = mcgs_verify_csv(game.handle, opt.horizon, opt.resolution,
                               opt.tol, opt.seed, nullptr, &text);
    }
  }
  if (status != MCGS_OK) return status;
  *output = text;
  mcgs_string_free(text);
  return MCGS_OK;
}

bool known_command(const std::string& name) {
  return name == "analyze-chain" || name == "value" || name == "nrvalue" ||
         name == "vhat-limit" || name == "mz" || name == "solve" ||
         name == "simulate" || name == "verify";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mcgs: repeated zero-sum games with Markov-chain private states"};
  Options opt;
  if (const char* env = std::getenv("MCGS_CACHE_DIR")) opt.cache_dir = env;

  app.add_option("--command", opt.command,
                 "one of: analyze-chain, value, nrvalue, vhat-limit, mz, "
                 "solve, simulate, verify")
      ->required();
  app.add_option("--game", opt.game_path, "path to the JSON game document")
      ->required();
  app.add_option("--T", opt.horizon,
                 "horizon: stages for value/nrvalue/solve/verify, the "
                 "doubling cap for vhat-limit/mz, stage count for simulate");
  app.add_option("--resolution", opt.resolution,
                 "belief-grid resolution per simplex");
  app.add_option("--tol", opt.tol, "per-stage saddle tolerance");
  app.add_option("--seed", opt.seed, "seed for simulate and verify");
  app.add_option("--runs", opt.runs, "Monte Carlo runs for simulate");
  app.add_option("--out", opt.out_path, "output file (default: stdout)");
  app.add_option("--cache", opt.cache_dir,
                 "cache directory (default: $MCGS_CACHE_DIR; empty disables)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!known_command(opt.command)) {
    std::cerr << "unknown command '" << opt.command << "'\n";
    return kExitUsage;
  }
  if (opt.horizon < 1 || opt.resolution < 2 || !(opt.tol > 0.0) ||
      opt.runs < 1) {
    std::cerr << "need --T >= 1, --resolution >= 2, --tol > 0, --runs >= 1\n";
    return kExitUsage;
  }

  std::string game_text;
  if (!read_file(opt.game_path, &game_text)) {
    std::cerr << "error (io): cannot read '" << opt.game_path << "'\n";
    return kExitError;
  }

  std::string output;
  std::string cache_path;
  bool cached = false;
  if (!opt.cache_dir.empty()) {
    std::string key = fnv1a_hex(game_text + "\n" + canonical_config(opt));
    cache_path = opt.cache_dir + "/" + key + ".out";
    cached = read_file(cache_path, &output);
  }
  if (!cached) {
    mcgs_status status = produce(opt, game_text, &output);
    if (status != MCGS_OK) {
      std::cerr << "error (" << mcgs_status_name(status)
                << "): " << mcgs_last_error() << "\n";
      return kExitError;
    }
    if (!cache_path.empty()) {
      write_file_atomic(cache_path, output);  // best effort
    }
  }

  if (opt.out_path.empty()) {
    std::cout << output;
  } else if (!write_file_atomic(opt.out_path, output)) {
    std::cerr << "error (io): cannot write '" << opt.out_path << "'\n";
    return kExitError;
  }

  // The exit code is derived from the output bytes, so cache hits behave
  // exactly like the original run.
  if (opt.command == "verify" && output.find(",FAIL,") != std::string::npos) {
    return kExitVerifyFailed;
  }
  return kExitOk;
}
