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

#ifndef LIPBO_THEORY_HARMLESS_HPP
#define LIPBO_THEORY_HARMLESS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lipbo/benchmarks/benchmarks.hpp"
#include "lipbo/core/types.hpp"
#include "lipbo/lipschitz/lipschitz.hpp"

namespace lipbo::theory {

enum class PruneKind { NoPrune, PruneKnownL, PruneGrowing };

struct PruneMode {
  PruneKind kind = PruneKind::NoPrune;
  double L = 0.0;  // PruneKnownL
  double kappa = lipschitz::kDefaultKappa;  // PruneGrowing

  std::string label() const {
    switch (kind) {
      case PruneKind::NoPrune: return "NoPrune";
      case PruneKind::PruneKnownL: return "PruneKnownL";
      case PruneKind::PruneGrowing: return "PruneGrowing";
    }
    return "?";
  }
};

/// Evaluations after which a trial is abandoned and marked censored.
inline constexpr std::size_t kMaxTrialEvaluations = 1000000;
/// Rejected candidates tolerated per evaluation before the last draw is accepted.
inline constexpr std::size_t kMaxCandidateRedraws = 10000;

struct TrialResult {
  std::size_t evaluations = 0;
  std::size_t rejected = 0;  // candidates discarded by the envelope without evaluation
  bool censored = false;
};

struct HarmlessStats {
  std::string mode;
  std::vector<TrialResult> trials;
  double mean_evaluations = 0.0;
  double median_evaluations = 0.0;
  double mean_rejected = 0.0;
  std::size_t censored = 0;
};

/**
 * Pure random search that stops at the first evaluation within `eps` of the
 * reference optimum. Pruning modes discard candidates with f^u(x) <= y*
 * before evaluating them; the growing mode uses kappa * t * L_lb with t the
 * number of evaluations so far and does not prune while that is zero.
 */
inline TrialResult random_search_trial(const bench::BenchmarkFn& fn, double eps, const PruneMode& mode,
                                       std::mt19937_64& rng) {
  TrialResult res;
  ObservationHistory history(fn.dim);
  lipschitz::SlopeLowerBound slope;
  double y_star = -kInf;
  while (res.evaluations < kMaxTrialEvaluations) {
    double L = 0.0;
    if (mode.kind == PruneKind::PruneKnownL) L = mode.L;
    if (mode.kind == PruneKind::PruneGrowing && slope.size() > 0)
      L = lipschitz::growing_L(slope.size(), slope.value(), mode.kappa);
    const bool prune = mode.kind != PruneKind::NoPrune && L > 0.0 && !history.empty();

    Point x = fn.box.sample_uniform(rng);
    for (std::size_t draw = 1; prune && draw < kMaxCandidateRedraws &&
                               lipschitz::is_pruned(lipschitz::envelope(history, L, x), y_star);
         ++draw) {
      ++res.rejected;
      x = fn.box.sample_uniform(rng);
    }
    const double y = fn.fn(x);
    ++res.evaluations;
    if (fn.ref_optimum - y <= eps) return res;
    y_star = std::max(y_star, y);
    if (mode.kind == PruneKind::NoPrune) continue;
    history.add(x, y);
    slope.add(x, y);
  }
  res.censored = true;
  return res;
}

/// Trial k of every mode uses a generator seeded with (seed, k), so arms are paired.
inline HarmlessStats harmless_pruning_experiment(const bench::BenchmarkFn& fn, double eps, const PruneMode& mode,
                                                 std::size_t trials, std::uint64_t seed) {
  if (!(eps > 0.0)) throw ConfigError("harmless: eps must be > 0");
  if (trials == 0) throw ConfigError("harmless: trials must be >= 1");
  if (mode.kind == PruneKind::PruneKnownL && !(mode.L > 0.0)) throw ConfigError("harmless: known L must be > 0");
  if (mode.kind == PruneKind::PruneGrowing && !(mode.kappa > 0.0)) throw ConfigError("harmless: kappa must be > 0");
  HarmlessStats stats;
  stats.mode = mode.label();
  std::vector<double> evals;
  double total_evals = 0.0, total_rejected = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(k)};
    std::mt19937_64 rng(seq);
    const auto r = random_search_trial(fn, eps, mode, rng);
    stats.trials.push_back(r);
    evals.push_back(static_cast<double>(r.evaluations));
    total_evals += static_cast<double>(r.evaluations);
    total_rejected += static_cast<double>(r.rejected);
    stats.censored += r.censored ? 1 : 0;
  }
  const double n = static_cast<double>(trials);
  stats.mean_evaluations = total_evals / n;
  stats.mean_rejected = total_rejected / n;
  std::sort(evals.begin(), evals.end());
  const std::size_t mid = evals.size() / 2;
  stats.median_evaluations = evals.size() % 2 ? evals[mid] : 0.5 * (evals[mid - 1] + evals[mid]);
  return stats;
}

}  // namespace lipbo::theory

#endif  // LIPBO_THEORY_HARMLESS_HPP
