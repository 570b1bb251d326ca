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

#include "mcgs/serialize.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace mcgs {

namespace {

using nlohmann::json;

// Integer with full-string consumption; forbids leading/trailing junk.
bool parse_ll(const std::string& s, long long& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtoll(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

double number_from_json(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number_text(v.get<std::string>(), field);
  fail(ErrorCode::kParse, field + ": expected a number or numeric string");
}

const json& member(const json& obj, const std::string& field) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    fail(ErrorCode::kParse, "missing field '" + field + "'");
  }
  return *it;
}

std::vector<std::string> string_list(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) {
    fail(ErrorCode::kParse, field + ": expected a nonempty array of names");
  }
  std::vector<std::string> out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string() || v[i].get<std::string>().empty()) {
      fail(ErrorCode::kValidation,
           field + "[" + std::to_string(i) + "]: names must be nonempty text");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

Vec number_list(const json& v, size_t want, const std::string& field) {
  if (!v.is_array() || v.size() != want) {
    fail(ErrorCode::kParse, field + ": expected an array of " +
                                std::to_string(want) + " numbers");
  }
  Vec out(want);
  for (size_t i = 0; i < want; ++i) {
    out[i] = number_from_json(v[i], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

Matrix transition_matrix(const json& v, int n, const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) {
    fail(ErrorCode::kParse,
         field + ": expected " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (int r = 0; r < n; ++r) {
    std::string row_field = field + "[" + std::to_string(r) + "]";
    Vec row = number_list(v[r], static_cast<size_t>(n), row_field);
    double sum = 0.0;
    for (int c = 0; c < n; ++c) {
      if (!(row[c] >= 0.0)) {
        fail(ErrorCode::kNotStochastic,
             row_field + "[" + std::to_string(c) + "]: negative probability " +
                 format_double(row[c]));
      }
      m.at(r, c) = row[c];
      sum += row[c];
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      fail(ErrorCode::kNotStochastic,
           row_field + ": row sums to " + format_double(sum));
    }
  }
  return m;
}

}  // namespace

double parse_number_text(const std::string& text, const std::string& field) {
  std::string s = text;
  // Trim ASCII whitespace at both ends.
  size_t b = s.find_first_not_of(" \t\r\n");
  size_t e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) {
    fail(ErrorCode::kParse, field + ": empty numeric string");
  }
  s = s.substr(b, e - b + 1);
  size_t slash = s.find('/');
  if (slash != std::string::npos) {
    long long num = 0, den = 0;
    if (!parse_ll(s.substr(0, slash), num) ||
        !parse_ll(s.substr(slash + 1), den) || den == 0) {
      fail(ErrorCode::kParse, field + ": malformed ratio '" + text + "'");
    }
    return static_cast<double>(num) / static_cast<double>(den);
  }
  errno = 0;
  char* end = nullptr;
  double x = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) {
    fail(ErrorCode::kParse, field + ": malformed number '" + text + "'");
  }
  return x;
}

GameSpec GameFile::to_spec() const {
  return GameSpec::create(states_k, states_l, actions_i, actions_j, payoff,
                          StochasticMatrix(transition_k),
                          StochasticMatrix(transition_l), p0, q0);
}

GameFile parse_game_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& err) {
    fail(ErrorCode::kParse, std::string("game file is not valid JSON: ") +
                                err.what());
  }
  if (!root.is_object()) {
    fail(ErrorCode::kParse, "game file must be a JSON object");
  }
  static const char* known[] = {"name",       "notes",      "states_k",
                                "states_l",   "actions_i",  "actions_j",
                                "payoff",     "transition_k", "transition_l",
                                "p0",         "q0"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail(ErrorCode::kParse, "unknown field '" + it.key() + "'");
  }

  GameFile g;
  g.states_k = string_list(member(root, "states_k"), "states_k");
  g.states_l = string_list(member(root, "states_l"), "states_l");
  g.actions_i = string_list(member(root, "actions_i"), "actions_i");
  g.actions_j = string_list(member(root, "actions_j"), "actions_j");
  int K = static_cast<int>(g.states_k.size());
  int L = static_cast<int>(g.states_l.size());
  int I = static_cast<int>(g.actions_i.size());
  int J = static_cast<int>(g.actions_j.size());

  const json& pay = member(root, "payoff");
  if (!pay.is_array() || static_cast<int>(pay.size()) != K) {
    fail(ErrorCode::kParse,
         "payoff: expected " + std::to_string(K) + " state-k blocks");
  }
  g.payoff.assign(static_cast<size_t>(K) * L * I * J, 0.0);
  for (int k = 0; k < K; ++k) {
    const json& bk = pay[k];
    if (!bk.is_array() || static_cast<int>(bk.size()) != L) {
      fail(ErrorCode::kParse, "payoff[" + std::to_string(k) + "]: expected " +
                                  std::to_string(L) + " state-l blocks");
    }
    for (int l = 0; l < L; ++l) {
      const json& bl = bk[l];
      std::string base =
          "payoff[" + std::to_string(k) + "][" + std::to_string(l) + "]";
      if (!bl.is_array() || static_cast<int>(bl.size()) != I) {
        fail(ErrorCode::kParse,
             base + ": expected " + std::to_string(I) + " rows");
      }
      for (int i = 0; i < I; ++i) {
        std::string row_field = base + "[" + std::to_string(i) + "]";
        Vec row = number_list(bl[i], static_cast<size_t>(J), row_field);
        for (int j = 0; j < J; ++j) {
          double x = row[j];
          if (!(x >= -1.0 && x <= 1.0)) {
            fail(ErrorCode::kValidation,
                 row_field + "[" + std::to_string(j) + "] outside [-1,1]: " +
                     format_double(x));
          }
          g.payoff[((static_cast<size_t>(k) * L + l) * I + i) * J + j] = x;
        }
      }
    }
  }

  g.transition_k = transition_matrix(member(root, "transition_k"), K,
                                     "transition_k");
  g.transition_l = transition_matrix(member(root, "transition_l"), L,
                                     "transition_l");
  g.p0 = validate_belief(number_list(member(root, "p0"), K, "p0"), "p0");
  g.q0 = validate_belief(number_list(member(root, "q0"), L, "q0"), "q0");
  return g;
}

GameFile load_game_file(const std::string& path) {
  return parse_game_text(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    fail(ErrorCode::kIo, "read failed on '" + path + "'");
  }
  return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(
                      static_cast<unsigned long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot create '" + tmp.string() + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out.good()) {
      fail(ErrorCode::kIo, "write failed on '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::kIo, "rename to '" + path + "' failed");
  }
}

std::string value_table_csv(const ValueTable& table,
                            const std::vector<std::string>& p_names,
                            const std::vector<std::string>& q_names) {
  const PairGrid& grid = table.grid();
  std::string out;
  for (const std::string& n : p_names) out += "p:" + n + ",";
  for (const std::string& n : q_names) out += "q:" + n + ",";
  out += "value,error\n";
  double err = table.interp_error() + table.solver_gap();
  std::string err_text = format_double(err);
  for (int pi = 0; pi < grid.p.size(); ++pi) {
    Vec p = grid.p.point(pi);
    std::string prefix;
    for (double x : p) prefix += format_double(x) + ",";
    for (int qi = 0; qi < grid.q.size(); ++qi) {
      Vec q = grid.q.point(qi);
      out += prefix;
      for (double x : q) out += format_double(x) + ",";
      out += format_double(table.at(pi, qi)) + "," + err_text + "\n";
    }
  }
  return out;
}

std::string chain_report(const ChainAnalysis& analysis,
                         const std::vector<std::string>& names,
                         const std::string& label) {
  std::ostringstream out;
  auto name_of = [&](int s) {
    return s < static_cast<int>(names.size()) ? names[s]
                                              : std::to_string(s);
  };
  out << label << ": " << analysis.size() << " states, "
      << analysis.num_classes() << " recurrent class"
      << (analysis.num_classes() == 1 ? "" : "es") << ", period "
      << analysis.period << "\n";
  for (int r = 0; r < analysis.num_classes(); ++r) {
    out << "  class " << (r + 1) << ": {";
    for (size_t i = 0; i < analysis.classes[r].size(); ++i) {
      out << (i ? ", " : "") << name_of(analysis.classes[r][i]);
    }
    out << "}, period " << analysis.class_periods[r] << ", invariant measure "
        << format_vec(analysis.invariant_measures[r]) << "\n";
  }
  if (!analysis.transient.empty()) {
    out << "  transient: {";
    for (size_t i = 0; i < analysis.transient.size(); ++i) {
      out << (i ? ", " : "") << name_of(analysis.transient[i]);
    }
    out << "}\n";
  }
  out << "  long-run projection:\n";
  for (int r = 0; r < analysis.size(); ++r) {
    Vec row(analysis.limit_matrix.row(r),
            analysis.limit_matrix.row(r) + analysis.size());
    out << "    from " << name_of(r) << ": " << format_vec(row) << "\n";
  }
  return out.str();
}

std::string content_hash(const std::string& data) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

ResultCache::ResultCache(std::string dir) : dir_(std::move(dir)) {}

std::string ResultCache::path_for(const std::string& key) const {
  return dir_ + "/" + key + ".out";
}

std::optional<std::string> ResultCache::lookup(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::string path = path_for(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  return read_file(path);
}

void ResultCache::store(const std::string& key, const std::string& value)
    const {
  if (!enabled()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  write_file_atomic(path_for(key), value);
}

std::string default_cache_dir() {
  const char* env = std::getenv("MCGS_CACHE_DIR");
  return env ? std::string(env) : std::string();
}

}  // namespace mcgs
