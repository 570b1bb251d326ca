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

#include "mcgs/transport.hpp"

#include <cmath>
#include <string>

#include "mcgs/lp.hpp"

namespace mcgs {

namespace {
constexpr double kWeightTol = 1e-10;
constexpr double kFiberTol = 1e-9;
}  // namespace

FiniteMeasure FiniteMeasure::dirac(const Vec& p) {
  FiniteMeasure m;
  m.atoms.push_back({1.0, p});
  return m;
}

Vec FiniteMeasure::mean() const {
  if (atoms.empty()) fail(ErrorCode::kBadArgument, "measure has no atoms");
  Vec m(atoms[0].point.size(), 0.0);
  for (const Atom& a : atoms) {
    for (size_t k = 0; k < m.size(); ++k) m[k] += a.weight * a.point[k];
  }
  return m;
}

void FiniteMeasure::validate(int dim) const {
  if (atoms.empty()) fail(ErrorCode::kBadArgument, "measure has no atoms");
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (a.weight < -kWeightTol) {
      fail(ErrorCode::kValidation, "measure has a negative weight");
    }
    total += a.weight;
    if (static_cast<int>(a.point.size()) != dim) {
      fail(ErrorCode::kValidation, "measure atom has the wrong dimension");
    }
    validate_belief(a.point, "measure atom");
  }
  if (std::fabs(total - 1.0) > kWeightTol) {
    fail(ErrorCode::kValidation,
         "measure weights sum to " + format_double(total));
  }
}

std::vector<Vec> laraki_transport(const Vec& weights,
                                  const std::vector<Vec>& sources,
                                  const Vec& target) {
  if (weights.empty() || weights.size() != sources.size()) {
    fail(ErrorCode::kBadArgument,
         "transport needs one weight per source point");
  }
  const size_t dim = target.size();
  Vec w = validate_belief(weights, "transport weights");
  Vec tgt = validate_belief(target, "transport target");
  for (const Vec& s : sources) {
    if (s.size() != dim) {
      fail(ErrorCode::kBadArgument, "source and target dimensions differ");
    }
    validate_belief(s, "transport source");
  }

  Vec p(dim, 0.0);
  for (size_t s = 0; s < sources.size(); ++s) {
    for (size_t k = 0; k < dim; ++k) p[k] += w[s] * sources[s][k];
  }
  Vec surplus(dim, 0.0), deficit(dim, 0.0);
  double pool = 0.0;
  for (size_t k = 0; k < dim; ++k) {
    double d = p[k] - tgt[k];
    if (d > 0) {
      surplus[k] = d;
      pool += d;
    } else {
      deficit[k] = -d;
    }
  }
  if (pool <= kWeightTol) return sources;

  std::vector<Vec> out(sources.size());
  for (size_t s = 0; s < sources.size(); ++s) {
    Vec dest = sources[s];
    double shed = 0.0;
    for (size_t k = 0; k < dim; ++k) {
      if (surplus[k] > 0.0) {
        // Surplus coordinates have p[k] > target[k] >= 0, so p[k] > 0.
        double out_k = surplus[k] * sources[s][k] / p[k];
        dest[k] -= out_k;
        shed += out_k;
      }
    }
    for (size_t k = 0; k < dim; ++k) {
      if (deficit[k] > 0.0) dest[k] += deficit[k] * shed / pool;
    }
    out[s] = std::move(dest);
  }
  return out;
}

Vec affine_fiber_map(const Vec& p, const Vec& from_masses,
                     const Vec& to_masses, const ChainAnalysis& analysis) {
  if (static_cast<int>(p.size()) != analysis.size()) {
    fail(ErrorCode::kBadArgument, "belief length does not match chain");
  }
  if (static_cast<int>(from_masses.size()) != analysis.num_classes() ||
      static_cast<int>(to_masses.size()) != analysis.num_classes()) {
    fail(ErrorCode::kBadArgument, "class mass vector length mismatch");
  }
  LambdaDecomposition d = lambda_decompose(p, analysis);
  if (l1_dist(d.lambda, from_masses) > kFiberTol) {
    fail(ErrorCode::kPreconditionViolated,
         "belief is not on the stated class-mass fiber");
  }
  Vec theta = validate_belief(to_masses, "target class masses");
  Vec out(analysis.size(), 0.0);
  for (int r = 0; r < analysis.num_classes(); ++r) {
    if (theta[r] == 0.0) continue;
    for (int v : analysis.classes[r]) out[v] += theta[r] * d.conditionals[r][v];
  }
  return out;
}

FiniteMeasure h_transport(const FiniteMeasure& mu, const Vec& target,
                          const ChainAnalysis& analysis) {
  mu.validate(analysis.size());
  Vec p = mu.mean();
  LambdaDecomposition from = lambda_decompose(p, analysis);
  for (const FiniteMeasure::Atom& a : mu.atoms) {
    LambdaDecomposition da = lambda_decompose(a.point, analysis);
    if (l1_dist(da.lambda, from.lambda) > kFiberTol) {
      fail(ErrorCode::kPreconditionViolated,
           "splitting atom leaves the class-mass fiber of the mean");
    }
  }
  Vec tgt = validate_belief(target, "transport target");
  LambdaDecomposition to = lambda_decompose(tgt, analysis);

  const size_t n = mu.atoms.size();
  Vec weights(n);
  std::vector<Vec> lifted(n);
  for (size_t i = 0; i < n; ++i) {
    weights[i] = mu.atoms[i].weight;
    lifted[i] =
        affine_fiber_map(mu.atoms[i].point, from.lambda, to.lambda, analysis);
  }

  FiniteMeasure out;
  out.atoms.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.atoms[i].weight = weights[i];
    out.atoms[i].point.assign(analysis.size(), 0.0);
  }
  for (int r = 0; r < analysis.num_classes(); ++r) {
    double mass = to.lambda[r];
    if (mass <= kWeightTol) continue;
    const std::vector<int>& cls = analysis.classes[r];
    std::vector<Vec> src(n, Vec(cls.size()));
    Vec goal(cls.size());
    for (size_t c = 0; c < cls.size(); ++c) {
      goal[c] = to.conditionals[r][cls[c]];
      for (size_t i = 0; i < n; ++i) src[i][c] = lifted[i][cls[c]] / mass;
    }
    std::vector<Vec> moved = laraki_transport(weights, src, goal);
    for (size_t i = 0; i < n; ++i) {
      for (size_t c = 0; c < cls.size(); ++c) {
        out.atoms[i].point[cls[c]] += mass * moved[i][c];
      }
    }
  }
  return out;
}

double wasserstein_l1(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  if (mu.atoms.empty() || nu.atoms.empty()) {
    fail(ErrorCode::kBadArgument, "measure has no atoms");
  }
  const int nu_count = static_cast<int>(nu.atoms.size());
  const int mu_count = static_cast<int>(mu.atoms.size());
  LpProblem lp;
  lp.n = mu_count * nu_count;
  lp.maximize = false;
  lp.c.assign(lp.n, 0.0);
  for (int u = 0; u < mu_count; ++u) {
    for (int v = 0; v < nu_count; ++v) {
      lp.c[u * nu_count + v] = l1_dist(mu.atoms[u].point, nu.atoms[v].point);
    }
  }
  // Marginal constraints; the final row is implied by the others and dropped
  // to keep the equality system full rank.
  lp.a_eq = Matrix(mu_count + nu_count - 1, lp.n);
  lp.b_eq.assign(mu_count + nu_count - 1, 0.0);
  for (int u = 0; u < mu_count; ++u) {
    for (int v = 0; v < nu_count; ++v) lp.a_eq.at(u, u * nu_count + v) = 1.0;
    lp.b_eq[u] = mu.atoms[u].weight;
  }
  for (int v = 0; v + 1 < nu_count; ++v) {
    for (int u = 0; u < mu_count; ++u) {
      lp.a_eq.at(mu_count + v, u * nu_count + v) = 1.0;
    }
    lp.b_eq[mu_count + v] = nu.atoms[v].weight;
  }
  LpResult res = lp_solve(lp);
  if (res.status != LpStatus::kOptimal) {
    fail(ErrorCode::kLpFailure, "transport plan solve failed");
  }
  return res.value;
}

bool convex_order_check(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  if (mu.atoms.empty() || nu.atoms.empty()) {
    fail(ErrorCode::kBadArgument, "measure has no atoms");
  }
  const int dim = static_cast<int>(mu.atoms[0].point.size());
  const int mu_count = static_cast<int>(mu.atoms.size());
  const int nu_count = static_cast<int>(nu.atoms.size());
  // Dilation variables F(u, v): rows for each source row-sum and barycenter,
  // then the target marginal (last entry implied, dropped).
  LpProblem lp;
  lp.n = mu_count * nu_count;
  lp.maximize = false;
  lp.c.assign(lp.n, 0.0);
  const int rows = mu_count * (1 + dim) + nu_count - 1;
  lp.a_eq = Matrix(rows, lp.n);
  lp.b_eq.assign(rows, 0.0);
  int row = 0;
  for (int u = 0; u < mu_count; ++u) {
    for (int v = 0; v < nu_count; ++v) lp.a_eq.at(row, u * nu_count + v) = 1.0;
    lp.b_eq[row++] = 1.0;
    for (int k = 0; k < dim; ++k) {
      for (int v = 0; v < nu_count; ++v) {
        lp.a_eq.at(row, u * nu_count + v) = nu.atoms[v].point[k];
      }
      lp.b_eq[row++] = mu.atoms[u].point[k];
    }
  }
  for (int v = 0; v + 1 < nu_count; ++v) {
    for (int u = 0; u < mu_count; ++u) {
      lp.a_eq.at(row, u * nu_count + v) = mu.atoms[u].weight;
    }
    lp.b_eq[row++] = nu.atoms[v].weight;
  }
  LpResult res = lp_solve(lp);
  if (res.status == LpStatus::kOptimal) return true;
  if (res.status == LpStatus::kInfeasible) return false;
  fail(ErrorCode::kLpFailure, "dilation feasibility solve failed");
}

}  // namespace mcgs
