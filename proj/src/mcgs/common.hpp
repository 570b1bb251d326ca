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

#ifndef MCGS_COMMON_HPP_
#define MCGS_COMMON_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcgs {

using Vec = std::vector<double>;

enum class ErrorCode {
  kParse,
  kValidation,
  kNotStochastic,
  kTransientState,
  kPeriodicChain,
  kLpFailure,
  kInfeasible,
  kUnbounded,
  kToleranceNotReached,
  kNotConverged,
  kPreconditionViolated,
  kBadArgument,
  kIo,
  kInternal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Dense row-major matrix. Small sizes throughout; no BLAS needed.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}
  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  double at(int r, int c) const {
    return a_[static_cast<size_t>(r) * cols_ + c];
  }
  double* row(int r) { return a_.data() + static_cast<size_t>(r) * cols_; }
  const double* row(int r) const {
    return a_.data() + static_cast<size_t>(r) * cols_;
  }
  const std::vector<double>& data() const { return a_; }

 private:
  int rows_, cols_;
  std::vector<double> a_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_pow(const Matrix& m, long long e);
Vec vec_mat(const Vec& v, const Matrix& m);  // row vector times matrix

double l1_norm(const Vec& v);
double l1_dist(const Vec& a, const Vec& b);
double sup_dist(const Vec& a, const Vec& b);
double dot(const Vec& a, const Vec& b);

// Validates a probability vector: entries >= -1e-12, sum within 1e-9 of one.
// Returns a cleaned copy (negatives clamped, renormalized).
Vec validate_belief(const Vec& p, const std::string& what);

// Deterministic stream of draws; same seed gives the same sequence on every
// platform (distributions are hand-rolled on top of the raw engine).
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  uint64_t next_u64() { return eng_(); }
  double uniform();                 // [0, 1)
  int pick(const Vec& weights);     // index ~ weights (need not be normalized)
  double uniform_in(double lo, double hi);

 private:
  std::mt19937_64 eng_;
};

// Shortest round-trip decimal text for a double, locale independent.
std::string format_double(double x);

std::string format_vec(const Vec& v);

// Sum with compensated accumulation; order-stable reductions.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double get() const { return s_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

}  // namespace mcgs

#endif  // MCGS_COMMON_HPP_
