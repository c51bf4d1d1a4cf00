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

#ifndef LIPBO_HARNESS_EXPERIMENT_HPP
#define LIPBO_HARNESS_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "lipbo/acquisition/acquisition.hpp"
#include "lipbo/benchmarks/benchmarks.hpp"
#include "lipbo/core/types.hpp"
#include "lipbo/direct/direct.hpp"
#include "lipbo/gp/fit.hpp"
#include "lipbo/gp/posterior.hpp"
#include "lipbo/harness/config.hpp"
#include "lipbo/harness/standardize.hpp"
#include "lipbo/lipschitz/lipschitz.hpp"

namespace lipbo::harness {

using bench::BenchmarkFn;
using direct::BoxDomain;
using lipschitz::EnvelopeValues;

enum class SelectionKind { Acquisition, Random, RandomLipschitzFiltered };

inline const char* to_string(SelectionKind kind) {
  switch (kind) {
    case SelectionKind::Acquisition: return "acq";
    case SelectionKind::Random: return "random";
    case SelectionKind::RandomLipschitzFiltered: return "random_lipschitz_filtered";
  }
  return "random";
}

inline SelectionKind selection_kind_from_string(const std::string& s) {
  if (s == "acq") return SelectionKind::Acquisition;
  if (s == "random") return SelectionKind::Random;
  if (s == "random_lipschitz_filtered") return SelectionKind::RandomLipschitzFiltered;
  throw ConfigError("unknown selection kind '" + s + "'");
}

/// Cap on Lipschitz-filtered random redraws; the last draw is accepted when reached.
inline constexpr std::size_t kMaxRandomRedraws = 10000;

struct IterationRecord {
  std::size_t t = 0;
  Point x;
  double y = 0.0;
  double best_so_far = -kInf;
  double L_hat = 0.0;  // raw units
  double acq_value = std::numeric_limits<double>::quiet_NaN();  // standardized units; NaN for random steps
  SelectionKind kind = SelectionKind::Random;
  double wall_time = 0.0;  // seconds; 0 unless requested
  double abs_error = 0.0;
};

struct RunTrace {
  std::string benchmark;
  std::string method;
  std::uint64_t seed = 0;
  double ref_optimum = 0.0;
  bool failed = false;
  std::string error;
  std::vector<std::string> warnings;
  std::vector<IterationRecord> records;

  std::vector<double> abs_error_curve() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.abs_error);
    return out;
  }
  double final_abs_error() const { return records.empty() ? kInf : records.back().abs_error; }
};

/// What select_next sees at iteration t. Values in `history` are standardized.
struct LoopState {
  BoxDomain box;
  ObservationHistory history;
  std::optional<gp::GpPosterior> posterior;  // needed unless the step is random
  double lipschitz = 0.0;  // standardized units; 0 means no Lipschitz information
  bool lbo = false;
  std::size_t t = 1;  // 1-based index of the evaluation being chosen
};

struct Selection {
  Point x;
  SelectionKind kind = SelectionKind::Acquisition;
  double acq_value = std::numeric_limits<double>::quiet_NaN();
  std::size_t rejected_draws = 0;
  std::string warning;
};

inline bool is_explore_step(std::size_t t, std::size_t explore_every) {
  return explore_every > 0 && t % explore_every == 0;
}

namespace detail {

inline bool has_envelope(const LoopState& s) { return s.lbo && s.lipschitz > 0.0 && !s.history.empty(); }

inline EnvelopeValues envelope_at(const LoopState& s, const Point& x) {
  return has_envelope(s) ? lipschitz::envelope(s.history, s.lipschitz, x) : EnvelopeValues{};
}

/// Uniform draws until f^u(x) > y* (no function evaluations involved).
inline Selection filtered_random(const LoopState& s, std::mt19937_64& rng) {
  Selection sel;
  sel.kind = s.lbo ? SelectionKind::RandomLipschitzFiltered : SelectionKind::Random;
  sel.x = s.box.sample_uniform(rng);
  if (!has_envelope(s)) return sel;
  const double y_star = s.history.best_value();
  for (std::size_t draw = 1; lipschitz::is_pruned(envelope_at(s, sel.x), y_star); ++draw) {
    ++sel.rejected_draws;
    if (draw >= kMaxRandomRedraws) {
      sel.warning = "random redraw cap reached; accepting the last draw";
      break;
    }
    sel.x = s.box.sample_uniform(rng);
  }
  return sel;
}

inline double acquisition_value(const LoopState& s, const acq::AcquisitionSpec& spec, double beta, double y_star,
                                const Point& x) {
  const auto m = s.posterior->predict(x);
  const EnvelopeValues env = envelope_at(s, x);
  switch (spec.base) {
    case acq::BaseAcquisition::UCB: {
      const double u = acq::ucb(m, beta);
      if (spec.lbo == acq::LboMode::Truncated) return acq::tucb(u, env);
      if (spec.lbo == acq::LboMode::AcceptReject) return acq::accept_reject(u, env);
      return u;
    }
    case acq::BaseAcquisition::EI:
      return spec.lbo == acq::LboMode::Truncated ? acq::tei(m, y_star, acq::truncation_limits(env, y_star))
                                                 : acq::ei(m, y_star);
    case acq::BaseAcquisition::PI:
      return spec.lbo == acq::LboMode::Truncated ? acq::tpi(m, acq::truncation_limits(env, y_star))
                                                 : acq::pi(m, y_star);
    default:
      throw ConfigError("acquisition_value: " + spec.name() + " is not optimized by DIRECT");
  }
}

/**
 * Thompson sampling over `n` candidates: n - 1 uniform points plus the
 * incumbent (a single uniform point when n = 1), one joint posterior draw,
 * argmax. Accept-reject drops candidates whose sampled value leaves the
 * envelope.
 */
inline Selection thompson(const LoopState& s, const RunConfig& cfg, std::mt19937_64& rng) {
  std::vector<Point> cands;
  const std::size_t n = cfg.ts_candidates;
  const std::size_t uniform = n > 1 ? n - 1 : 1;
  cands.reserve(uniform + 1);
  for (std::size_t i = 0; i < uniform; ++i) cands.push_back(s.box.sample_uniform(rng));
  if (n > 1) cands.push_back(s.history.point(s.history.best_index()));
  const auto draw = s.posterior->sample_joint(cands, rng);

  std::size_t best = 0;
  for (std::size_t i = 1; i < draw.size(); ++i)
    if (draw[i] > draw[best]) best = i;

  Selection sel;
  if (cfg.acquisition.lbo == acq::LboMode::AcceptReject && has_envelope(s)) {
    std::optional<std::size_t> kept;
    for (std::size_t i = 0; i < draw.size(); ++i) {
      if (acq::accept_reject(draw[i], envelope_at(s, cands[i])) == -kInf) continue;
      if (!kept || draw[i] > draw[*kept]) kept = i;
    }
    if (kept) {
      best = *kept;
    } else {
      sel.warning = "every Thompson candidate was rejected; using the unfiltered argmax";
    }
  }
  sel.x = cands[best];
  sel.acq_value = draw[best];
  return sel;
}

}  // namespace detail

/**
 * Chooses the point for evaluation t. Random draws come from `rng`; so do the
 * Thompson candidates and then the Thompson sample.
 *
 * An acceptance-rejection acquisition that rejects every DIRECT probe falls
 * back to a Lipschitz-filtered random point.
 */
inline Selection select_next(const LoopState& state, const RunConfig& cfg, std::mt19937_64& rng) {
  const auto& spec = cfg.acquisition;
  if (state.history.empty()) throw Error("select_next: empty history");
  if (spec.base == acq::BaseAcquisition::Random) {
    Selection sel;
    sel.kind = SelectionKind::Random;
    sel.x = state.box.sample_uniform(rng);
    return sel;
  }
  if (is_explore_step(state.t, cfg.explore_every)) return detail::filtered_random(state, rng);
  if (!state.posterior) throw Error("select_next: posterior required for acquisition steps");
  if (spec.base == acq::BaseAcquisition::TS) return detail::thompson(state, cfg, rng);

  const double beta = acq::beta_schedule(state.t, state.box.dim(), spec.beta);
  const double y_star = state.history.best_value();
  const auto res = direct::direct_maximize(
      [&](const Point& x) { return detail::acquisition_value(state, spec, beta, y_star, x); }, state.box,
      cfg.direct_budget);
  if (res.value == -kInf) {
    Selection sel = detail::filtered_random(state, rng);
    sel.warning = "every DIRECT probe was rejected; using a Lipschitz-filtered random point";
    return sel;
  }
  Selection sel;
  sel.x = res.x;
  sel.acq_value = res.value;
  return sel;
}

namespace detail {

inline double current_lipschitz(const LipschitzSetting& setting, const lipschitz::SlopeLowerBound& slope,
                                double offline_L) {
  switch (setting.kind) {
    case LipschitzKind::Off: return 0.0;
    case LipschitzKind::Known: return setting.value;
    case LipschitzKind::OfflineTrue: return offline_L;
    case LipschitzKind::Growing:
      return slope.size() == 0 ? 0.0 : lipschitz::growing_L(slope.size(), slope.value(), setting.kappa);
  }
  return 0.0;
}

}  // namespace detail

/// The offline "true" L used by OfflineTrue runs (fixed sampling seed).
inline double offline_lipschitz(const BenchmarkFn& f, std::size_t samples) {
  return lipschitz::estimate_true_L(f.fn, f.box.lower, f.box.upper, samples, 0);
}

/**
 * One BO/LBO run. The first `init_points` evaluations are uniform draws; each
 * later iteration re-standardizes the values, refits the GP (warm-started,
 * with a fit seed drawn from the run generator), rescales L by the standard
 * deviation and calls select_next. Exploration steps and pure random search
 * skip the model.
 */
inline RunTrace run_seed(const BenchmarkFn& f, const RunConfig& cfg, std::uint64_t seed, double offline_L = 0.0) {
  RunTrace trace;
  trace.benchmark = f.name;
  trace.method = cfg.method_name();
  trace.seed = seed;
  trace.ref_optimum = f.ref_optimum;

  std::mt19937_64 rng(seed);
  ObservationHistory raw(f.dim);
  lipschitz::SlopeLowerBound slope;
  std::optional<gp::KernelParams> warm;
  const bool lbo = cfg.acquisition.lbo != acq::LboMode::None && cfg.lipschitz.kind != LipschitzKind::Off;
  const bool model_free = cfg.acquisition.base == acq::BaseAcquisition::Random;
  const Eigen::VectorXd ls_mode = f.box.width() / 4.0;

  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    const auto start = std::chrono::steady_clock::now();
    const double L_raw = detail::current_lipschitz(cfg.lipschitz, slope, offline_L);
    Selection sel;
    if (t <= cfg.init_points) {
      sel.kind = SelectionKind::Random;
      sel.x = f.box.sample_uniform(rng);
    } else {
      const auto z = standardize(raw.values());
      LoopState state{f.box, raw.with_values(z.values), std::nullopt, lbo ? z.state.scale_lipschitz(L_raw) : 0.0, lbo, t};
      if (!model_free && !is_explore_step(t, cfg.explore_every)) {
        gp::KernelParams params;
        if (raw.size() >= 2) {
          gp::FitConfig fc;
          fc.starts = cfg.fit_starts;
          fc.noise_sd = cfg.noise_sd;
          fc.length_scale_mode = ls_mode;
          fc.seed = rng();
          fc.warm_start = warm;
          params = gp::fit_hyperparams(state.history, fc).params;
          warm = params;
        } else {
          params.length_scales = ls_mode;
          params.noise_sd = cfg.noise_sd;
        }
        state.posterior = gp::build_posterior(state.history, params);
      }
      sel = select_next(state, cfg, rng);
    }
    const double y = bench::evaluate(f, sel.x);
    raw.add(sel.x, y);
    slope.add(sel.x, y);

    IterationRecord rec;
    rec.t = t;
    rec.x = sel.x;
    rec.y = y;
    rec.best_so_far = trace.records.empty() ? y : std::max(trace.records.back().best_so_far, y);
    rec.L_hat = L_raw;
    rec.acq_value = sel.acq_value;
    rec.kind = sel.kind;
    rec.abs_error = std::max(0.0, f.ref_optimum - rec.best_so_far);
    if (cfg.record_wall_time)
      rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!sel.warning.empty()) trace.warnings.push_back("t=" + std::to_string(t) + ": " + sel.warning);
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

namespace detail {

inline RunTrace run_seed_or_fail(const BenchmarkFn& f, const RunConfig& cfg, std::uint64_t seed, double offline_L) {
  try {
    return run_seed(f, cfg, seed, offline_L);
  } catch (const std::exception& e) {
    RunTrace failed;
    failed.benchmark = f.name;
    failed.method = cfg.method_name();
    failed.seed = seed;
    failed.ref_optimum = f.ref_optimum;
    failed.failed = true;
    failed.error = e.what();
    return failed;
  }
}

}  // namespace detail

/**
 * All seeds of `cfg` on `f`, in seed order. A seed that throws is recorded as
 * failed; the batch continues. With jobs > 1 seeds run on worker threads; the
 * traces do not depend on the job count.
 */
inline std::vector<RunTrace> run_experiment(const BenchmarkFn& f, const RunConfig& cfg, std::size_t jobs = 1) {
  cfg.validate();
  const double offline_L =
      cfg.lipschitz.kind == LipschitzKind::OfflineTrue ? offline_lipschitz(f, cfg.true_L_samples) : 0.0;
  std::vector<RunTrace> traces(cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < traces.size(); i = next++)
      traces[i] = detail::run_seed_or_fail(f, cfg, cfg.seeds[i], offline_L);
  };
  const std::size_t threads = std::min(std::max<std::size_t>(jobs, 1), traces.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  return traces;
}

inline std::vector<RunTrace> run_experiment(const RunConfig& cfg, std::size_t jobs = 1) {
  return run_experiment(bench::lookup(cfg.benchmark), cfg, jobs);
}

}  // namespace lipbo::harness

#endif  // LIPBO_HARNESS_EXPERIMENT_HPP
