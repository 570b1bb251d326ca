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

#include "mcgs/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace mcgs {

namespace {

constexpr double kPriorTol = 1e-9;

// Deterministic per-run seed derivation (splitmix-style finalizer), so run
// r of a simulation depends on (seed, r) only.
uint64_t mix_seed(uint64_t seed, uint64_t run) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (run + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vec matrix_row(const Matrix& m, int r) {
  return Vec(m.row(r), m.row(r) + m.cols());
}

std::vector<int> flatten(const History& h) {
  std::vector<int> key;
  key.reserve(2 * h.size());
  for (const auto& step : h) {
    key.push_back(step.first);
    key.push_back(step.second);
  }
  return key;
}

class ConstantKernel : public Kernel {
 public:
  explicit ConstantKernel(BehavioralAction a) : action_(std::move(a)) {}
  BehavioralAction act(const History&) override { return action_; }

 private:
  BehavioralAction action_;
};

class FunctionKernel : public Kernel {
 public:
  explicit FunctionKernel(std::function<BehavioralAction(const History&)> f)
      : fn_(std::move(f)) {}
  BehavioralAction act(const History& h) override { return fn_(h); }

 private:
  std::function<BehavioralAction(const History&)> fn_;
};

// Outside-view joint posterior over (component, next private state) of one
// player, updated from the declared component behaviors.
class MixtureTracker {
 public:
  MixtureTracker(const Strategy& strategy, const Matrix& chain)
      : chain_(&chain),
        w_(static_cast<int>(strategy.components.size()), chain.rows()) {
    for (int c = 0; c < w_.rows(); ++c) {
      const StrategyComponent& sc = strategy.components[c];
      for (int k = 0; k < w_.cols(); ++k) {
        w_.at(c, k) = sc.weight * sc.state_prior[k];
      }
    }
  }

  // Applies the likelihood of the observed action under each component's
  // declared behavior, then the chain step. An action the model deems
  // impossible keeps the prior, mirroring bayes_posterior.
  void update(const std::vector<BehavioralAction>& acts, int action) {
    const int n = w_.rows(), states = w_.cols();
    Matrix lik(n, states);
    double total = 0.0;
    for (int c = 0; c < n; ++c) {
      for (int k = 0; k < states; ++k) {
        double m = w_.at(c, k) * acts[c].rows.at(k, action);
        lik.at(c, k) = m;
        total += m;
      }
    }
    if (total <= 0.0) {
      lik = w_;
      total = 1.0;
    }
    Matrix next(n, states, 0.0);
    for (int c = 0; c < n; ++c) {
      for (int k = 0; k < states; ++k) {
        double m = lik.at(c, k) / total;
        if (m == 0.0) continue;
        for (int k2 = 0; k2 < states; ++k2) {
          next.at(c, k2) += m * chain_->at(k, k2);
        }
      }
    }
    w_ = std::move(next);
  }

  Vec belief() const {
    Vec p(w_.cols(), 0.0);
    double total = 0.0;
    for (int c = 0; c < w_.rows(); ++c) {
      for (int k = 0; k < w_.cols(); ++k) {
        p[k] += w_.at(c, k);
        total += w_.at(c, k);
      }
    }
    for (double& v : p) v /= total;
    return p;
  }

 private:
  const Matrix* chain_;
  Matrix w_;
};

int pick_component(const Strategy& s, int state, Rng& rng) {
  if (s.components.size() == 1) return 0;
  Vec weights(s.components.size());
  for (size_t c = 0; c < s.components.size(); ++c) {
    weights[c] = s.components[c].weight * s.components[c].state_prior[state];
  }
  return rng.pick(weights);
}

}  // namespace

KernelPtr constant_kernel(BehavioralAction action) {
  return std::make_shared<ConstantKernel>(std::move(action));
}

KernelPtr uniform_kernel(int states, int actions) {
  return constant_kernel(BehavioralAction::uniform(states, actions));
}

KernelPtr function_kernel(std::function<BehavioralAction(const History&)> fn) {
  return std::make_shared<FunctionKernel>(std::move(fn));
}

Vec Strategy::prior() const {
  if (components.empty()) {
    fail(ErrorCode::kBadArgument, "strategy has no components");
  }
  Vec p(components[0].state_prior.size(), 0.0);
  for (const StrategyComponent& c : components) {
    for (size_t k = 0; k < p.size(); ++k) p[k] += c.weight * c.state_prior[k];
  }
  return p;
}

void Strategy::forget() const {
  for (const StrategyComponent& c : components) c.kernel->forget();
}

Strategy single_kernel_strategy(KernelPtr kernel, Vec prior) {
  Strategy s;
  s.components.push_back({1.0, std::move(prior), std::move(kernel)});
  return s;
}

Strategy split_strategy(const Vec& weights,
                        const std::vector<std::pair<Vec, Strategy>>& parts) {
  if (weights.empty() || weights.size() != parts.size()) {
    fail(ErrorCode::kBadArgument, "split needs one weight per part");
  }
  Vec w = validate_belief(weights, "split weights");
  Strategy out;
  for (size_t s = 0; s < parts.size(); ++s) {
    Vec stated = validate_belief(parts[s].first, "split belief");
    if (l1_dist(stated, parts[s].second.prior()) > kPriorTol) {
      fail(ErrorCode::kBadArgument,
           "part strategy prior differs from its stated belief");
    }
    if (w[s] == 0.0) continue;
    for (const StrategyComponent& c : parts[s].second.components) {
      out.components.push_back({w[s] * c.weight, c.state_prior, c.kernel});
    }
  }
  return out;
}

SimulationStats simulate(const GameSpec& spec, const Strategy& sigma,
                         const Strategy& tau, int horizon, int runs,
                         uint64_t seed, int record_limit) {
  if (horizon < 1 || runs < 1) {
    fail(ErrorCode::kBadArgument, "simulation needs horizon and runs >= 1");
  }
  if (l1_dist(sigma.prior(), spec.p0) > kPriorTol) {
    fail(ErrorCode::kPreconditionViolated,
         "row strategy prior does not match the game prior");
  }
  if (l1_dist(tau.prior(), spec.q0) > kPriorTol) {
    fail(ErrorCode::kPreconditionViolated,
         "column strategy prior does not match the game prior");
  }

  SimulationStats stats;
  stats.runs = runs;
  stats.horizon = horizon;
  const int keep = record_limit < 0 ? runs : std::min(record_limit, runs);
  stats.records.reserve(keep);
  const Matrix& mk = spec.chain_k.matrix;
  const Matrix& ml = spec.chain_l.matrix;
  KahanSum sum, sumsq;

  for (int run = 0; run < runs; ++run) {
    sigma.forget();
    tau.forget();
    Rng rng(mix_seed(seed, static_cast<uint64_t>(run)));
    int k = rng.pick(spec.p0);
    int l = rng.pick(spec.q0);
    const int cs = pick_component(sigma, k, rng);
    const int ct = pick_component(tau, l, rng);
    MixtureTracker tp(sigma, mk), tq(tau, ml);
    History hs, ht;
    const bool keep_this = static_cast<int>(stats.records.size()) < keep;
    PlayRecord rec;
    if (keep_this) {
      rec.p0 = tp.belief();
      rec.q0 = tq.belief();
      rec.p0_hat = vec_mat(rec.p0, spec.chain_k.limit_matrix);
      rec.q0_hat = vec_mat(rec.q0, spec.chain_l.limit_matrix);
      rec.stages.reserve(horizon);
    }
    std::vector<BehavioralAction> acts_s(sigma.components.size());
    std::vector<BehavioralAction> acts_t(tau.components.size());
    KahanSum payoff;
    for (int t = 0; t < horizon; ++t) {
      for (size_t c = 0; c < acts_s.size(); ++c) {
        acts_s[c] = sigma.components[c].kernel->act(hs);
      }
      for (size_t c = 0; c < acts_t.size(); ++c) {
        acts_t[c] = tau.components[c].kernel->act(ht);
      }
      const int i = rng.pick(matrix_row(acts_s[cs].rows, k));
      const int j = rng.pick(matrix_row(acts_t[ct].rows, l));
      const double g = spec.g(k, l, i, j);
      payoff.add(g);
      tp.update(acts_s, i);
      tq.update(acts_t, j);
      if (keep_this) {
        StageRecord sr;
        sr.state_k = k;
        sr.state_l = l;
        sr.action_i = i;
        sr.action_j = j;
        sr.payoff = g;
        sr.p = tp.belief();
        sr.q = tq.belief();
        sr.p_hat = vec_mat(sr.p, spec.chain_k.limit_matrix);
        sr.q_hat = vec_mat(sr.q, spec.chain_l.limit_matrix);
        rec.stages.push_back(std::move(sr));
      }
      k = rng.pick(matrix_row(mk, k));
      l = rng.pick(matrix_row(ml, l));
      hs.push_back({i, j});
      ht.push_back({j, i});
    }
    const double avg = payoff.get() / horizon;
    sum.add(avg);
    sumsq.add(avg * avg);
    if (keep_this) {
      rec.average_payoff = avg;
      stats.records.push_back(std::move(rec));
    }
  }
  stats.mean = sum.get() / runs;
  if (runs > 1) {
    double var = (sumsq.get() - runs * stats.mean * stats.mean) / (runs - 1);
    stats.std_error = std::sqrt(std::max(0.0, var) / runs);
  }
  return stats;
}

namespace {

// Per-component unnormalized likelihood vectors over one player's states.
// Summing a side over components and states gives that side's likelihood
// of the public history; the product of the two sides is its probability.
struct EnumSide {
  std::vector<Vec> u;

  double mass() const {
    double m = 0.0;
    for (const Vec& c : u) {
      for (double v : c) m += v;
    }
    return m;
  }

  Vec belief(int states) const {
    Vec p(states, 0.0);
    double total = 0.0;
    for (const Vec& c : u) {
      for (int k = 0; k < states; ++k) {
        p[k] += c[k];
        total += c[k];
      }
    }
    for (double& v : p) v /= total;
    return p;
  }
};

struct EnumContext {
  const GameSpec* spec = nullptr;
  const Strategy* sigma = nullptr;
  const Strategy* tau = nullptr;
  int horizon = 0;
  HistoryLaw* out = nullptr;
  KahanSum payoff;
};

void enum_dfs(EnumContext& ctx, int t, History& hs, History& ht,
              std::vector<int>& key, const EnumSide& us, const EnumSide& vs) {
  const GameSpec& spec = *ctx.spec;
  const int states_k = spec.K(), states_l = spec.L();
  if (t == ctx.horizon) {
    double prob = us.mass() * vs.mass();
    if (prob <= 0.0) return;
    ctx.out->prob[key] = prob;
    ctx.out->posterior_p[key] = us.belief(states_k);
    ctx.out->posterior_q[key] = vs.belief(states_l);
    return;
  }
  std::vector<BehavioralAction> xs(ctx.sigma->components.size());
  std::vector<BehavioralAction> ys(ctx.tau->components.size());
  for (size_t c = 0; c < xs.size(); ++c) {
    xs[c] = ctx.sigma->components[c].kernel->act(hs);
  }
  for (size_t c = 0; c < ys.size(); ++c) {
    ys[c] = ctx.tau->components[c].kernel->act(ht);
  }
  // Joint stage masses a[i][k] = P(prefix likelihood, k_t = k, i_t = i).
  std::vector<Vec> a(spec.I(), Vec(states_k, 0.0));
  std::vector<Vec> b(spec.J(), Vec(states_l, 0.0));
  for (size_t c = 0; c < xs.size(); ++c) {
    for (int k = 0; k < states_k; ++k) {
      for (int i = 0; i < spec.I(); ++i) {
        a[i][k] += us.u[c][k] * xs[c].rows.at(k, i);
      }
    }
  }
  for (size_t c = 0; c < ys.size(); ++c) {
    for (int l = 0; l < states_l; ++l) {
      for (int j = 0; j < spec.J(); ++j) {
        b[j][l] += vs.u[c][l] * ys[c].rows.at(l, j);
      }
    }
  }
  double stage = 0.0;
  for (int i = 0; i < spec.I(); ++i) {
    for (int j = 0; j < spec.J(); ++j) {
      for (int k = 0; k < states_k; ++k) {
        for (int l = 0; l < states_l; ++l) {
          stage += a[i][k] * b[j][l] * spec.g(k, l, i, j);
        }
      }
    }
  }
  ctx.payoff.add(stage);

  // Likelihood-then-transition updates, shared across the (i, j) grid.
  const Matrix& mk = spec.chain_k.matrix;
  const Matrix& ml = spec.chain_l.matrix;
  std::vector<EnumSide> unext(spec.I()), vnext(spec.J());
  for (int i = 0; i < spec.I(); ++i) {
    unext[i].u.assign(xs.size(), Vec(states_k, 0.0));
    for (size_t c = 0; c < xs.size(); ++c) {
      for (int k = 0; k < states_k; ++k) {
        double m = us.u[c][k] * xs[c].rows.at(k, i);
        if (m == 0.0) continue;
        for (int k2 = 0; k2 < states_k; ++k2) {
          unext[i].u[c][k2] += m * mk.at(k, k2);
        }
      }
    }
  }
  for (int j = 0; j < spec.J(); ++j) {
    vnext[j].u.assign(ys.size(), Vec(states_l, 0.0));
    for (size_t c = 0; c < ys.size(); ++c) {
      for (int l = 0; l < states_l; ++l) {
        double m = vs.u[c][l] * ys[c].rows.at(l, j);
        if (m == 0.0) continue;
        for (int l2 = 0; l2 < states_l; ++l2) {
          vnext[j].u[c][l2] += m * ml.at(l, l2);
        }
      }
    }
  }
  for (int i = 0; i < spec.I(); ++i) {
    for (int j = 0; j < spec.J(); ++j) {
      if (unext[i].mass() * vnext[j].mass() <= 0.0) continue;
      key.push_back(i);
      key.push_back(j);
      hs.push_back({i, j});
      ht.push_back({j, i});
      enum_dfs(ctx, t + 1, hs, ht, key, unext[i], vnext[j]);
      ht.pop_back();
      hs.pop_back();
      key.pop_back();
      key.pop_back();
    }
  }
}

}  // namespace

HistoryLaw enumerate_history_law(const GameSpec& spec, const Strategy& sigma,
                                 const Strategy& tau, int horizon) {
  if (horizon < 0) fail(ErrorCode::kBadArgument, "negative horizon");
  HistoryLaw law;
  law.horizon = horizon;
  EnumContext ctx;
  ctx.spec = &spec;
  ctx.sigma = &sigma;
  ctx.tau = &tau;
  ctx.horizon = horizon;
  ctx.out = &law;
  EnumSide us, vs;
  for (const StrategyComponent& c : sigma.components) {
    Vec u(c.state_prior);
    for (double& v : u) v *= c.weight;
    us.u.push_back(std::move(u));
  }
  for (const StrategyComponent& c : tau.components) {
    Vec u(c.state_prior);
    for (double& v : u) v *= c.weight;
    vs.u.push_back(std::move(u));
  }
  History hs, ht;
  std::vector<int> key;
  enum_dfs(ctx, 0, hs, ht, key, us, vs);
  law.expected_average_payoff = horizon > 0 ? ctx.payoff.get() / horizon : 0.0;
  return law;
}

HistoryLaw empirical_history_law(const std::vector<PlayRecord>& records,
                                 int horizon) {
  if (records.empty()) fail(ErrorCode::kBadArgument, "no records");
  HistoryLaw law;
  law.horizon = horizon;
  const double unit = 1.0 / records.size();
  KahanSum payoff;
  for (const PlayRecord& rec : records) {
    if (static_cast<int>(rec.stages.size()) < horizon) {
      fail(ErrorCode::kBadArgument, "record shorter than the horizon");
    }
    std::vector<int> key;
    key.reserve(2 * horizon);
    for (int t = 0; t < horizon; ++t) {
      key.push_back(rec.stages[t].action_i);
      key.push_back(rec.stages[t].action_j);
    }
    law.prob[key] += unit;
    payoff.add(rec.average_payoff);
  }
  law.expected_average_payoff = payoff.get() * unit;
  return law;
}

double total_variation(const HistoryLaw& a, const HistoryLaw& b) {
  double d = 0.0;
  for (const auto& entry : a.prob) {
    auto it = b.prob.find(entry.first);
    d += std::fabs(entry.second - (it == b.prob.end() ? 0.0 : it->second));
  }
  for (const auto& entry : b.prob) {
    if (a.prob.find(entry.first) == a.prob.end()) d += entry.second;
  }
  return 0.5 * d;
}

double max_martingale_defect(const GameSpec& spec, const Strategy& sigma,
                             const Strategy& tau, int horizon) {
  double worst = 0.0;
  HistoryLaw prev = enumerate_history_law(spec, sigma, tau, 0);
  for (int t = 1; t <= horizon; ++t) {
    HistoryLaw cur = enumerate_history_law(spec, sigma, tau, t);
    for (const auto& entry : prev.prob) {
      const std::vector<int>& key = entry.first;
      Vec exp_p(spec.K(), 0.0), exp_q(spec.L(), 0.0);
      double mass = 0.0;
      for (int i = 0; i < spec.I(); ++i) {
        for (int j = 0; j < spec.J(); ++j) {
          std::vector<int> child = key;
          child.push_back(i);
          child.push_back(j);
          auto it = cur.prob.find(child);
          if (it == cur.prob.end()) continue;
          mass += it->second;
          const Vec& cp = cur.posterior_p[child];
          const Vec& cq = cur.posterior_q[child];
          for (int k = 0; k < spec.K(); ++k) exp_p[k] += it->second * cp[k];
          for (int l = 0; l < spec.L(); ++l) exp_q[l] += it->second * cq[l];
        }
      }
      if (mass <= 0.0) continue;
      for (double& v : exp_p) v /= mass;
      for (double& v : exp_q) v /= mass;
      Vec want_p = vec_mat(prev.posterior_p[key], spec.chain_k.limit_matrix);
      Vec want_q = vec_mat(prev.posterior_q[key], spec.chain_l.limit_matrix);
      worst = std::max(
          worst, sup_dist(vec_mat(exp_p, spec.chain_k.limit_matrix), want_p));
      worst = std::max(
          worst, sup_dist(vec_mat(exp_q, spec.chain_l.limit_matrix), want_q));
    }
    prev = std::move(cur);
  }
  return worst;
}

MartingaleReport martingale_diagnostics(
    const std::vector<PlayRecord>& records) {
  if (records.empty()) fail(ErrorCode::kBadArgument, "no records");
  const int horizon = static_cast<int>(records[0].stages.size());
  const int dim_p = static_cast<int>(records[0].p0.size());
  const int dim_q = static_cast<int>(records[0].q0.size());
  const int runs = static_cast<int>(records.size());
  for (const PlayRecord& r : records) {
    if (static_cast<int>(r.stages.size()) != horizon) {
      fail(ErrorCode::kBadArgument, "records have mixed horizons");
    }
  }

  MartingaleReport rep;
  rep.bound_p = std::sqrt(horizon * (dim_p - 1.0));
  rep.bound_q = std::sqrt(horizon * (dim_q - 1.0));

  KahanSum vp_sum, vp_sq, vq_sum, vq_sq;
  // Increment accumulators per (stage, coordinate) for the z statistics.
  std::vector<KahanSum> zp_sum(horizon * dim_p), zp_sq(horizon * dim_p);
  std::vector<KahanSum> zq_sum(horizon * dim_q), zq_sq(horizon * dim_q);
  for (const PlayRecord& r : records) {
    double vp = 0.0, vq = 0.0;
    const Vec* prev_p = &r.p0_hat;
    const Vec* prev_q = &r.q0_hat;
    for (int t = 0; t < horizon; ++t) {
      const StageRecord& s = r.stages[t];
      vp += l1_dist(s.p_hat, *prev_p);
      vq += l1_dist(s.q_hat, *prev_q);
      for (int k = 0; k < dim_p; ++k) {
        double d = s.p_hat[k] - (*prev_p)[k];
        zp_sum[t * dim_p + k].add(d);
        zp_sq[t * dim_p + k].add(d * d);
      }
      for (int l = 0; l < dim_q; ++l) {
        double d = s.q_hat[l] - (*prev_q)[l];
        zq_sum[t * dim_q + l].add(d);
        zq_sq[t * dim_q + l].add(d * d);
      }
      prev_p = &s.p_hat;
      prev_q = &s.q_hat;
    }
    vp_sum.add(vp);
    vp_sq.add(vp * vp);
    vq_sum.add(vq);
    vq_sq.add(vq * vq);
  }
  rep.variation_p = vp_sum.get() / runs;
  rep.variation_q = vq_sum.get() / runs;
  if (runs > 1) {
    double var_p =
        (vp_sq.get() - runs * rep.variation_p * rep.variation_p) / (runs - 1);
    double var_q =
        (vq_sq.get() - runs * rep.variation_q * rep.variation_q) / (runs - 1);
    rep.variation_se_p = std::sqrt(std::max(0.0, var_p) / runs);
    rep.variation_se_q = std::sqrt(std::max(0.0, var_q) / runs);
  }
  auto max_z = [runs](const std::vector<KahanSum>& sums,
                      const std::vector<KahanSum>& sqs) {
    double worst = 0.0;
    for (size_t i = 0; i < sums.size(); ++i) {
      double mean = sums[i].get() / runs;
      double var = runs > 1
                       ? std::max(0.0, (sqs[i].get() - runs * mean * mean) /
                                           (runs - 1))
                       : 0.0;
      double se = std::sqrt(var / runs);
      // Constant projections leave rounding residue in both the mean and
      // the spread; anything at the noise floor is a clean zero, not a
      // huge studentized statistic.
      if (std::fabs(mean) <= 1e-12) continue;
      if (se > 0.0) {
        worst = std::max(worst, std::fabs(mean) / se);
      } else {
        worst = std::max(worst, 1e9);
      }
    }
    return worst;
  };
  rep.max_abs_z = std::max(max_z(zp_sum, zp_sq), max_z(zq_sum, zq_sq));
  rep.within_bounds =
      rep.variation_p <= rep.bound_p + 3.0 * rep.variation_se_p &&
      rep.variation_q <= rep.bound_q + 3.0 * rep.variation_se_q;
  return rep;
}

namespace {

// Saddle solutions of the remaining-stage concealed games, cached by
// (remaining, p, q) and shared by every kernel of one strategy family.
class NodeSolver {
 public:
  NodeSolver(GameSpec spec,
             std::shared_ptr<const std::vector<ValueTable>> tables,
             SaddleOptions options, int t0)
      : spec_(std::move(spec)),
        tables_(std::move(tables)),
        options_(options),
        t0_(t0) {
    if (!tables_ || static_cast<int>(tables_->size()) < t0_ || t0_ < 1) {
      fail(ErrorCode::kBadArgument,
           "concealed stage tables shorter than the block");
    }
  }

  int block_length() const { return t0_; }
  const GameSpec& spec() const { return spec_; }

  struct Node {
    BehavioralAction x, y;
  };

  const Node& solve(const Vec& p, const Vec& q, int remaining) {
    auto key = std::make_tuple(remaining, p, q);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    SaddleDomain xdom = SaddleDomain::from_polytope(
        nr_polytope(p, spec_.chain_k, spec_.I()));
    SaddleDomain ydom = SaddleDomain::from_polytope(
        nr_polytope(q, spec_.chain_l, spec_.J()));
    const ValueTable* cont =
        remaining >= 2 ? &(*tables_)[remaining - 2] : nullptr;
    SaddleResult res = solve_stage_game(spec_, p, q, 1.0 / remaining, cont,
                                        xdom, ydom, options_);
    Node node;
    node.x = BehavioralAction::from_flat(res.x, spec_.K(), spec_.I());
    node.y = BehavioralAction::from_flat(res.y, spec_.L(), spec_.J());
    return cache_.emplace(std::move(key), std::move(node)).first->second;
  }

 private:
  GameSpec spec_;
  std::shared_ptr<const std::vector<ValueTable>> tables_;
  SaddleOptions options_;
  int t0_;
  std::map<std::tuple<int, Vec, Vec>, Node> cache_;
};

// Stage-by-stage extraction of the optimal concealed play: each visited
// history pins a node with tracked beliefs (own play and the solved
// opponent model) and the saddle strategy of the remaining-stage game.
// Nodes are a pure function of the history, so caches persist across runs.
class NrDpKernel : public Kernel {
 public:
  NrDpKernel(std::shared_ptr<NodeSolver> solver, Vec p, Vec q)
      : solver_(std::move(solver)), p0_(std::move(p)), q0_(std::move(q)) {}

  BehavioralAction act(const History& h) override { return node_for(h).node.x; }

 private:
  struct PathNode {
    Vec p, q;
    NodeSolver::Node node;
  };

  const PathNode& node_for(const History& h) {
    std::vector<int> key = flatten(h);
    auto it = path_.find(key);
    if (it != path_.end()) return it->second;
    PathNode pn;
    if (h.empty()) {
      pn.p = p0_;
      pn.q = q0_;
    } else {
      History parent(h.begin(), h.end() - 1);
      const PathNode& par = node_for(parent);
      const GameSpec& spec = solver_->spec();
      pn.p = advance(bayes_posterior(par.p, par.node.x, h.back().first),
                     spec.chain_k.matrix);
      pn.q = advance(bayes_posterior(par.q, par.node.y, h.back().second),
                     spec.chain_l.matrix);
    }
    const int t0 = solver_->block_length();
    const int remaining = t0 - static_cast<int>(h.size()) % t0;
    pn.node = solver_->solve(pn.p, pn.q, remaining);
    return path_.emplace(std::move(key), std::move(pn)).first->second;
  }

  std::shared_ptr<NodeSolver> solver_;
  Vec p0_, q0_;
  std::map<std::vector<int>, PathNode> path_;
};

}  // namespace

Strategy nr_optimal_block_strategy(
    const GameSpec& spec, const Vec& p, const Vec& q,
    std::shared_ptr<const std::vector<ValueTable>> vhat_stage, double epsilon,
    const SaddleOptions& options) {
  if (epsilon < 0.0 || epsilon > 1.0) {
    fail(ErrorCode::kBadArgument, "perturbation weight must lie in [0, 1]");
  }
  Vec pp = validate_belief(p, "row belief");
  Vec qq = validate_belief(q, "column belief");
  Strategy out;
  if (epsilon > 0.0) {
    out.components.push_back(
        {epsilon, pp, uniform_kernel(spec.K(), spec.I())});
  }
  if (epsilon < 1.0) {
    const int t0 = vhat_stage ? static_cast<int>(vhat_stage->size()) : 0;
    auto solver = std::make_shared<NodeSolver>(spec, std::move(vhat_stage),
                                               options, t0);
    out.components.push_back(
        {1.0 - epsilon, pp,
         std::make_shared<NrDpKernel>(std::move(solver), pp, qq)});
  }
  return out;
}

namespace {

// Behavioral realization of the block construction. All internal
// randomization (per-block split-atom choice and the uniform branch, both
// tied to the private state at the block start) is carried as a joint
// posterior over (branch, state) and folded into the returned mixed
// action; the induced play distribution is unchanged. Every stage quantity
// is a pure function of the public history and cached, so repeated runs
// and exhaustive enumeration revisit nodes for free. The opponent-model
// kernels must share that purity (act depending on the history alone).
class BlockKernel : public Kernel {
 public:
  BlockKernel(const GameSpec& spec, const BlockStrategyConfig& config,
              std::shared_ptr<NodeSolver> solver)
      : spec_(spec),
        w_(config.w),
        vhat_full_(config.vhat->full),
        model_(config.opponent_model),
        solver_(std::move(solver)),
        t0_(config.t0),
        epsilon_(config.epsilon),
        split_tol_(config.split_tol) {}

  BehavioralAction act(const History& h) override { return state_for(h).out; }

 private:
  struct Branch {
    Vec wk;            // joint mass over (this branch, current state)
    KernelPtr kernel;  // play since the block start
  };

  struct State {
    int block_start = 0;
    Vec p, q;   // tracked beliefs entering this stage
    Matrix vq;  // opponent joint mass over (model component, state)
    std::vector<Branch> branches;
    std::vector<BehavioralAction> branch_acts, opp_acts;
    BehavioralAction out;
  };

  const State& state_for(const History& h) {
    std::vector<int> key = flatten(h);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    State st;
    if (h.empty()) {
      st.p = spec_.p0;
      st.vq = Matrix(static_cast<int>(model_.components.size()), spec_.L());
      for (int c = 0; c < st.vq.rows(); ++c) {
        const StrategyComponent& sc = model_.components[c];
        for (int l = 0; l < spec_.L(); ++l) {
          st.vq.at(c, l) = sc.weight * sc.state_prior[l];
        }
      }
      st.q = q_marginal(st.vq);
      start_block(st, 0);
    } else {
      History parent(h.begin(), h.end() - 1);
      const State& par = state_for(parent);
      advance_state(par, h.back(), st);
      const int t = static_cast<int>(h.size());
      if (t % t0_ == 0) {
        start_block(st, t);
      } else {
        st.block_start = par.block_start;
      }
    }
    finish_stage(h, st);
    return cache_.emplace(std::move(key), std::move(st)).first->second;
  }

  Vec q_marginal(const Matrix& vq) const {
    Vec q(spec_.L(), 0.0);
    double total = 0.0;
    for (int c = 0; c < vq.rows(); ++c) {
      for (int l = 0; l < spec_.L(); ++l) {
        q[l] += vq.at(c, l);
        total += vq.at(c, l);
      }
    }
    for (double& v : q) v /= total;
    return q;
  }

  // Bayes update of both tracked sides from the parent stage's declared
  // behaviors, then one chain step. A zero-likelihood observation keeps
  // the prior, mirroring bayes_posterior.
  void advance_state(const State& par, std::pair<int, int> actions,
                     State& st) const {
    const auto [i, j] = actions;
    const Matrix& mk = spec_.chain_k.matrix;
    const size_t nb = par.branches.size();
    std::vector<Vec> lik(nb);
    double total = 0.0;
    for (size_t b = 0; b < nb; ++b) {
      lik[b] = par.branches[b].wk;
      for (int k = 0; k < spec_.K(); ++k) {
        lik[b][k] *= par.branch_acts[b].rows.at(k, i);
        total += lik[b][k];
      }
    }
    st.branches.reserve(nb);
    for (size_t b = 0; b < nb; ++b) {
      Branch next;
      next.kernel = par.branches[b].kernel;
      Vec scaled;
      if (total > 0.0) {
        scaled = std::move(lik[b]);
        for (double& v : scaled) v /= total;
      } else {
        scaled = par.branches[b].wk;
      }
      next.wk = vec_mat(scaled, mk);
      st.branches.push_back(std::move(next));
    }
    st.p.assign(spec_.K(), 0.0);
    double mass = 0.0;
    for (const Branch& b : st.branches) {
      for (int k = 0; k < spec_.K(); ++k) {
        st.p[k] += b.wk[k];
        mass += b.wk[k];
      }
    }
    for (double& v : st.p) v /= mass;

    const Matrix& ml = spec_.chain_l.matrix;
    Matrix qlik(par.vq.rows(), spec_.L());
    double qtotal = 0.0;
    for (int c = 0; c < par.vq.rows(); ++c) {
      for (int l = 0; l < spec_.L(); ++l) {
        qlik.at(c, l) = par.vq.at(c, l) * par.opp_acts[c].rows.at(l, j);
        qtotal += qlik.at(c, l);
      }
    }
    if (qtotal <= 0.0) {
      qlik = par.vq;
      qtotal = 1.0;
    }
    st.vq = Matrix(par.vq.rows(), spec_.L(), 0.0);
    for (int c = 0; c < par.vq.rows(); ++c) {
      for (int l = 0; l < spec_.L(); ++l) {
        double m = qlik.at(c, l) / qtotal;
        if (m == 0.0) continue;
        for (int l2 = 0; l2 < spec_.L(); ++l2) {
          st.vq.at(c, l2) += m * ml.at(l, l2);
        }
      }
    }
    st.q = q_marginal(st.vq);
  }

  // Chooses the regime for the block opening at stage t: play the optimal
  // concealed strategy when its limit already reaches the target, else
  // split toward beliefs where it does. Uniform play is the same from
  // every split atom, so a single branch carries the perturbation mass.
  void start_block(State& st, int t) {
    st.block_start = t;
    st.branches.clear();
    const double keep = 1.0 - epsilon_;
    if (vhat_full_.eval(st.p, st.q) >= w_.eval(st.p, st.q)) {
      Branch dp;
      dp.wk = st.p;
      for (double& v : dp.wk) v *= keep;
      dp.kernel = std::make_shared<NrDpKernel>(solver_, st.p, st.q);
      st.branches.push_back(std::move(dp));
    } else {
      Splitting split =
          splitting_for_cav(w_, vhat_full_, st.p, st.q, split_tol_);
      for (const Splitting::Atom& atom : split.atoms) {
        Branch dp;
        dp.wk.assign(spec_.K(), 0.0);
        for (int k = 0; k < spec_.K(); ++k) {
          dp.wk[k] = keep * atom.weight * atom.point[k];
        }
        dp.kernel = std::make_shared<NrDpKernel>(solver_, atom.point, st.q);
        st.branches.push_back(std::move(dp));
      }
    }
    Branch uni;
    uni.wk = st.p;
    for (double& v : uni.wk) v *= epsilon_;
    uni.kernel = uniform_kernel(spec_.K(), spec_.I());
    st.branches.push_back(std::move(uni));
  }

  void finish_stage(const History& h, State& st) {
    History block_hist(h.begin() + st.block_start, h.end());
    st.branch_acts.resize(st.branches.size());
    for (size_t b = 0; b < st.branches.size(); ++b) {
      st.branch_acts[b] = st.branches[b].kernel->act(block_hist);
    }
    History opp(h.size());
    for (size_t s = 0; s < h.size(); ++s) {
      opp[s] = {h[s].second, h[s].first};
    }
    st.opp_acts.resize(model_.components.size());
    for (size_t c = 0; c < model_.components.size(); ++c) {
      st.opp_acts[c] = model_.components[c].kernel->act(opp);
    }
    st.out.rows = Matrix(spec_.K(), spec_.I(), 0.0);
    for (int k = 0; k < spec_.K(); ++k) {
      double denom = 0.0;
      for (const Branch& b : st.branches) denom += b.wk[k];
      if (denom <= 0.0) {
        for (int i = 0; i < spec_.I(); ++i) {
          st.out.rows.at(k, i) = 1.0 / spec_.I();
        }
        continue;
      }
      for (size_t b = 0; b < st.branches.size(); ++b) {
        if (st.branches[b].wk[k] == 0.0) continue;
        for (int i = 0; i < spec_.I(); ++i) {
          st.out.rows.at(k, i) +=
              st.branches[b].wk[k] / denom * st.branch_acts[b].rows.at(k, i);
        }
      }
    }
  }

  GameSpec spec_;
  ValueTable w_, vhat_full_;
  Strategy model_;
  std::shared_ptr<NodeSolver> solver_;
  int t0_;
  double epsilon_, split_tol_;
  std::map<std::vector<int>, State> cache_;
};

}  // namespace

Strategy block_strategy(const GameSpec& spec,
                        const BlockStrategyConfig& config) {
  if (config.t0 < 1) {
    fail(ErrorCode::kBadArgument, "block length must be positive");
  }
  if (!(config.epsilon > 0.0) || config.epsilon >= 1.0 / spec.I()) {
    fail(ErrorCode::kBadArgument,
         "perturbation weight must lie in (0, 1/actions)");
  }
  if (config.vhat == nullptr) {
    fail(ErrorCode::kBadArgument, "concealed limit table missing");
  }
  if (config.opponent_model.components.empty()) {
    fail(ErrorCode::kBadArgument, "opponent model missing");
  }
  auto solver = std::make_shared<NodeSolver>(spec, config.vhat_stage,
                                             config.saddle, config.t0);
  return single_kernel_strategy(
      std::make_shared<BlockKernel>(spec, config, std::move(solver)),
      spec.p0);
}

}  // namespace mcgs
