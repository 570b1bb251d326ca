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

#include "mcgs/common.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace mcgs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kValidation: return "Validation";
    case ErrorCode::kNotStochastic: return "NotStochastic";
    case ErrorCode::kTransientState: return "TransientState";
    case ErrorCode::kPeriodicChain: return "PeriodicChain";
    case ErrorCode::kLpFailure: return "LpFailure";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kBadArgument: return "BadArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::kInternal, "matrix shape mismatch");
  Matrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      double aik = a.at(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.row(k);
      double* rrow = r.row(i);
      for (int j = 0; j < b.cols(); ++j) rrow[j] += aik * brow[j];
    }
  }
  return r;
}

Matrix mat_pow(const Matrix& m, long long e) {
  if (m.rows() != m.cols()) fail(ErrorCode::kInternal, "mat_pow needs square");
  Matrix result = Matrix::identity(m.rows());
  Matrix base = m;
  while (e > 0) {
    if (e & 1) result = mat_mul(result, base);
    base = mat_mul(base, base);
    e >>= 1;
  }
  return result;
}

Vec vec_mat(const Vec& v, const Matrix& m) {
  if (static_cast<int>(v.size()) != m.rows()) {
    fail(ErrorCode::kInternal, "vec_mat shape mismatch");
  }
  Vec r(m.cols(), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    double vi = v[i];
    if (vi == 0.0) continue;
    const double* row = m.row(i);
    for (int j = 0; j < m.cols(); ++j) r[j] += vi * row[j];
  }
  return r;
}

double l1_norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double l1_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double sup_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    s = std::max(s, std::fabs(a[i] - b[i]));
  }
  return s;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec validate_belief(const Vec& p, const std::string& what) {
  if (p.empty()) fail(ErrorCode::kValidation, what + ": empty belief");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= -1e-12)) {
      fail(ErrorCode::kValidation,
           what + ": negative probability " + format_double(x));
    }
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    fail(ErrorCode::kValidation,
         what + ": probabilities sum to " + format_double(sum));
  }
  Vec out(p);
  for (double& x : out) x = std::max(x, 0.0) / sum;
  return out;
}

double Rng::uniform() {
  // 53 random bits scaled to [0, 1); independent of std distribution quirks.
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_in(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

int Rng::pick(const Vec& weights) {
  double total = 0.0;
  for (double w : weights) total += std::max(w, 0.0);
  if (total <= 0.0) fail(ErrorCode::kInternal, "pick from zero weights");
  double u = uniform() * total;
  double acc = 0.0;
  int last = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    double w = std::max(weights[i], 0.0);
    if (w == 0.0) continue;
    acc += w;
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

std::string format_double(double x) {
  if (x == 0.0) return "0";  // avoid "-0"
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  }
  return std::string(buf, ptr);
}

std::string format_vec(const Vec& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  s += ")";
  return s;
}

}  // namespace mcgs
