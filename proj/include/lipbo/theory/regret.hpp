/*
 * Copyright 2026 The lipbo Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LIPBO_THEORY_REGRET_HPP
#define LIPBO_THEORY_REGRET_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "lipbo/acquisition/acquisition.hpp"
#include "lipbo/core/types.hpp"
#include "lipbo/gp/kernel.hpp"
#include "lipbo/gp/posterior.hpp"
#include "lipbo/lipschitz/lipschitz.hpp"

namespace lipbo::theory {

using lipschitz::EnvelopeValues;

/// A finite grid with one GP sample path on it.
struct FiniteDecisionSpace {
  std::vector<Point> points;
  std::vector<double> true_f;
  gp::KernelParams kernel;  // the generating GP; noise_sd is the model noise level sigma

  std::size_t size() const { return points.size(); }

  std::size_t argmax() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < true_f.size(); ++i)
      if (true_f[i] > true_f[best]) best = i;
    return best;
  }

  /// Largest |f_i - f_j| / ||x_i - x_j|| over the grid: the exact L of the sampled function on the space.
  double exact_lipschitz() const {
    return lipschitz::estimate_L_lb(ObservationHistory::from_samples(points, true_f)).value;
  }
};

/// `n` evenly spaced points on [0, 1] (n >= 2).
inline std::vector<Point> unit_grid_1d(std::size_t n) {
  if (n < 2) throw DomainError("unit_grid_1d: need at least two points");
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(Point::Constant(1, static_cast<double>(i) / static_cast<double>(n - 1)));
  return pts;
}

/// Draws the sample path from the prior of `kernel` with a generator seeded by `seed`.
inline FiniteDecisionSpace make_decision_space(std::vector<Point> points, const gp::KernelParams& kernel,
                                               std::uint64_t seed) {
  if (points.empty()) throw DomainError("make_decision_space: no points");
  FiniteDecisionSpace space;
  space.kernel = kernel;
  const auto prior = gp::build_posterior(ObservationHistory(kernel.dim()), kernel);
  space.true_f = prior.sample_joint(points, seed);
  space.points = std::move(points);
  return space;
}

/// 1/2 log det(I + sigma^-2 K_S): the information gain of the selected (possibly repeated) points.
inline double information_gain(const std::vector<Point>& selected, const gp::KernelParams& kernel, double noise_sd) {
  if (selected.empty()) return 0.0;
  if (!(noise_sd > 0.0)) throw DomainError("information_gain: noise_sd must be > 0");
  Eigen::MatrixXd a = gp::kernel_matrix(kernel, selected) / (noise_sd * noise_sd);
  a.diagonal().array() += 1.0;
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw FactorizationError("information_gain: factorization failed");
  return llt.matrixLLT().diagonal().array().log().sum();
}

enum class RegretPolicy { GPUCB, ARUCB };

inline const char* to_string(RegretPolicy p) { return p == RegretPolicy::GPUCB ? "GP-UCB" : "AR-UCB"; }

struct RegretConfig {
  std::size_t grid_size = 50;
  double length_scale = 0.1;
  double signal_scale = 1.0;
  double noise_sd = 0.01;  // sigma in the model and the bound; observations themselves are exact
  std::size_t horizon = 100;
  double delta = 0.1;
  bool srinivas_beta = false;  // false: beta^{1/2} = 2 log(|D| pi_t / delta)

  gp::KernelParams kernel() const {
    auto k = gp::KernelParams::isotropic(1, length_scale, signal_scale, noise_sd);
    k.kind = gp::KernelKind::SquaredExponential;
    return k;
  }

  acq::TheoremBeta beta() const { return {static_cast<double>(grid_size), delta, srinivas_beta}; }

  void validate() const {
    if (grid_size < 2) throw ConfigError("regret: grid_size must be >= 2");
    if (horizon < 1) throw ConfigError("regret: horizon must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("regret: delta must lie in (0, 1)");
    if (!(noise_sd > 0.0)) throw ConfigError("regret: noise_sd must be > 0");
    kernel().validate();
  }
};

/// Per-run regret curve plus the per-round invariant counters.
struct RegretRun {
  RegretPolicy policy = RegretPolicy::GPUCB;
  std::uint64_t seed = 0;
  std::vector<std::size_t> selected;  // grid indices
  std::vector<double> instantaneous;  // r_t
  std::vector<double> cumulative;     // R(t)
  double lipschitz = 0.0;
  double gamma = 0.0;  // information gain of the selected points
  double bound = 0.0;  // (8 / log(1 + sigma^-2)) beta_T gamma_T sqrt(T)
  bool bound_holds = false;

  // Counters over all rounds.
  std::size_t maximizer_outside_envelope = 0;   // f(x*) not in [f^l(x*), f^u(x*)]
  std::size_t maximizer_ucb_rejected = 0;       // UCB(x*) failed the accept-reject test (diagnostic)
  std::size_t sandwich_violations = 0;          // grid points with f outside the envelope
  std::size_t pointwise_violations = 0;         // r_t > min{2 beta^{1/2} sigma(x_t), f^u(x_t) - f^l(x_t)}
  std::size_t gap_violations = 0;               // f^u(x_t) - f^l(x_t) > 2 L min_i ||x_t - x_i||
  std::size_t empty_filter_rounds = 0;          // AR filter rejected every point; unfiltered argmax used

  double final_regret() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

/// Slack for the deterministic envelope inequalities, which only suffer round-off.
inline constexpr double kEnvelopeSlack = 1e-9;

/**
 * One run of GP-UCB or AR-UCB on `space` with the correctly specified GP and
 * the theorem beta schedule. AR-UCB uses the exact grid Lipschitz constant;
 * when its filter empties the space the round falls back to the unfiltered
 * argmax. Observations are the exact sample-path values, so the Lipschitz
 * envelope is valid and repeated picks of one point agree.
 */
inline RegretRun run_regret(const FiniteDecisionSpace& space, const RegretConfig& cfg, RegretPolicy policy,
                            std::uint64_t seed = 0) {
  cfg.validate();
  const std::size_t n = space.size();
  const auto beta_kind = cfg.beta();
  const std::size_t star = space.argmax();
  const double f_star = space.true_f[star];

  RegretRun run;
  run.policy = policy;
  run.seed = seed;
  run.lipschitz = space.exact_lipschitz();
  const double L = run.lipschitz;

  auto post = gp::build_posterior(ObservationHistory(space.kernel.dim()), space.kernel);
  ObservationHistory observed(space.kernel.dim());
  double regret = 0.0;
  std::vector<double> ucb(n), sd(n);
  std::vector<EnvelopeValues> env(n);

  for (std::size_t t = 1; t <= cfg.horizon; ++t) {
    const double beta = acq::beta_schedule(t, 1, beta_kind);
    const double root_beta = std::sqrt(beta);
    for (std::size_t i = 0; i < n; ++i) {
      const auto m = post.predict(space.points[i]);
      sd[i] = m.sigma;
      ucb[i] = acq::ucb(m, beta);
      env[i] = observed.empty() ? EnvelopeValues{} : lipschitz::envelope(observed, L, space.points[i]);
      const double f = space.true_f[i];
      if (f < env[i].lower - kEnvelopeSlack || f > env[i].upper + kEnvelopeSlack) ++run.sandwich_violations;
    }
    if (f_star < env[star].lower - kEnvelopeSlack || f_star > env[star].upper + kEnvelopeSlack)
      ++run.maximizer_outside_envelope;
    if (acq::accept_reject(ucb[star], env[star]) == -kInf) ++run.maximizer_ucb_rejected;

    std::size_t pick = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (ucb[i] > ucb[pick]) pick = i;
    if (policy == RegretPolicy::ARUCB) {
      bool found = false;
      std::size_t kept = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double g = acq::accept_reject(ucb[i], env[i]);
        if (g == -kInf) continue;
        if (!found || g > ucb[kept]) kept = i;
        found = true;
      }
      if (found) {
        pick = kept;
      } else {
        ++run.empty_filter_rounds;
      }
    }

    const double r = f_star - space.true_f[pick];
    const double width = env[pick].upper - env[pick].lower;
    if (r > std::min(2.0 * root_beta * sd[pick], width) + kEnvelopeSlack) ++run.pointwise_violations;
    if (!observed.empty()) {
      double nearest = kInf;
      for (const auto& x : observed.points()) nearest = std::min(nearest, (space.points[pick] - x).norm());
      if (width > 2.0 * L * nearest + kEnvelopeSlack) ++run.gap_violations;
    }

    const double y = space.true_f[pick];
    post = post.updated(space.points[pick], y);
    observed.add(space.points[pick], y);
    regret += r;
    run.selected.push_back(pick);
    run.instantaneous.push_back(r);
    run.cumulative.push_back(regret);
  }

  std::vector<Point> chosen;
  chosen.reserve(run.selected.size());
  for (std::size_t i : run.selected) chosen.push_back(space.points[i]);
  run.gamma = information_gain(chosen, space.kernel, cfg.noise_sd);
  const double T = static_cast<double>(cfg.horizon);
  const double beta_T = acq::beta_schedule(cfg.horizon, 1, beta_kind);
  run.bound = 8.0 / std::log1p(1.0 / (cfg.noise_sd * cfg.noise_sd)) * beta_T * run.gamma * std::sqrt(T);
  run.bound_holds = run.final_regret() <= run.bound;
  return run;
}

struct RegretPair {
  std::uint64_t seed = 0;
  RegretRun gp_ucb;
  RegretRun ar_ucb;
};

/// Per seed: a fresh 1-D grid sample path, then both policies on it.
inline std::vector<RegretPair> ar_ucb_regret_experiment(const RegretConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  cfg.validate();
  std::vector<RegretPair> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    const auto space = make_decision_space(unit_grid_1d(cfg.grid_size), cfg.kernel(), seed);
    out.push_back({seed, run_regret(space, cfg, RegretPolicy::GPUCB, seed),
                   run_regret(space, cfg, RegretPolicy::ARUCB, seed)});
  }
  return out;
}

struct RegretSummary {
  std::size_t seeds = 0;
  double mean_regret_gp_ucb = 0.0;
  double mean_regret_ar_ucb = 0.0;
  std::size_t bound_violations = 0;        // runs (either policy) with R(T) above the bound
  std::size_t ar_bound_violations = 0;     // AR-UCB runs only
  std::size_t maximizer_outside_envelope = 0;
  std::size_t maximizer_ucb_rejected = 0;
  std::size_t sandwich_violations = 0;
  std::size_t pointwise_violations = 0;
  std::size_t gap_violations = 0;
  std::size_t empty_filter_rounds = 0;
  std::vector<double> mean_curve_gp_ucb;  // mean R(t)
  std::vector<double> mean_curve_ar_ucb;
};

inline RegretSummary summarize(const std::vector<RegretPair>& pairs) {
  RegretSummary s;
  s.seeds = pairs.size();
  if (pairs.empty()) return s;
  const std::size_t T = pairs.front().gp_ucb.cumulative.size();
  s.mean_curve_gp_ucb.assign(T, 0.0);
  s.mean_curve_ar_ucb.assign(T, 0.0);
  const double k = static_cast<double>(pairs.size());
  for (const auto& p : pairs) {
    for (std::size_t t = 0; t < T; ++t) {
      s.mean_curve_gp_ucb[t] += p.gp_ucb.cumulative[t] / k;
      s.mean_curve_ar_ucb[t] += p.ar_ucb.cumulative[t] / k;
    }
    s.bound_violations += (p.gp_ucb.bound_holds ? 0 : 1) + (p.ar_ucb.bound_holds ? 0 : 1);
    s.ar_bound_violations += p.ar_ucb.bound_holds ? 0 : 1;
    s.maximizer_outside_envelope += p.ar_ucb.maximizer_outside_envelope;
    s.maximizer_ucb_rejected += p.ar_ucb.maximizer_ucb_rejected;
    s.sandwich_violations += p.ar_ucb.sandwich_violations;
    s.pointwise_violations += p.ar_ucb.pointwise_violations;
    s.gap_violations += p.ar_ucb.gap_violations;
    s.empty_filter_rounds += p.ar_ucb.empty_filter_rounds;
  }
  s.mean_regret_gp_ucb = s.mean_curve_gp_ucb.back();
  s.mean_regret_ar_ucb = s.mean_curve_ar_ucb.back();
  return s;
}

}  // namespace lipbo::theory

#endif  // LIPBO_THEORY_REGRET_HPP
