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

#ifndef LIPBO_ACQUISITION_ACQUISITION_HPP
#define LIPBO_ACQUISITION_ACQUISITION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <variant>

#include "lipbo/core/types.hpp"
#include "lipbo/gp/posterior.hpp"
#include "lipbo/lipschitz/lipschitz.hpp"

namespace lipbo::acq {

using gp::PredictiveMoments;
using lipschitz::EnvelopeValues;

// Standard normal helpers.

inline double normal_pdf(double z) {
  if (!std::isfinite(z)) return 0.0;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Phi(a) - Phi(b) for a >= b, computed on the tail that avoids cancellation.
inline double normal_cdf_diff(double a, double b) {
  if (a <= b) return 0.0;
  if (b >= 0.0) return normal_cdf(-b) - normal_cdf(-a);
  return normal_cdf(a) - normal_cdf(b);
}

/// z(u, v) = (mu(u) - v) / sigma(u).
inline double z_score(double mu, double sigma, double v) {
  if (!(sigma > 0.0)) throw DomainError("z_score: sigma must be > 0");
  return (mu - v) / sigma;
}

// z with the infinite-limit conventions used by the truncated forms.
inline double z_limit(double mu, double sigma, double v) {
  if (v == kInf) return -kInf;
  if (v == -kInf) return kInf;
  return (mu - v) / sigma;
}

inline double ucb(const PredictiveMoments& m, double beta_t) {
  if (!(beta_t >= 0.0)) throw DomainError("ucb: beta must be >= 0");
  if (m.sigma == 0.0) return m.mu;
  return m.mu + std::sqrt(beta_t) * m.sigma;
}

inline double ei(const PredictiveMoments& m, double y_star) {
  if (!(m.sigma > 0.0)) return std::max(m.mu - y_star, 0.0);
  const double z = (m.mu - y_star) / m.sigma;
  return m.sigma * (z * normal_cdf(z) + normal_pdf(z));
}

inline double pi(const PredictiveMoments& m, double y_star) {
  if (!(m.sigma > 0.0)) return m.mu >= y_star ? 1.0 : 0.0;
  return normal_cdf((m.mu - y_star) / m.sigma);
}

/// Integration limits (L_f, U_f) on f(x) for the truncated improvement integrals.
struct TruncationLimits {
  double lo;
  double hi;
};

/**
 * U_f is always f^u. L_f is y* clamped into [f^l, f^u]: y* inside the envelope
 * gives y*, y* above it gives f^u (a rejected point), y* below it gives f^l.
 *
 * An inconsistent envelope (f^l > f^u, possible when L is under-estimated)
 * has no feasible value and is treated like a rejected point.
 */
inline TruncationLimits truncation_limits(const EnvelopeValues& env, double y_star) {
  if (!env.consistent()) return {env.upper, env.upper};
  return {std::clamp(y_star, env.lower, env.upper), env.upper};
}

/**
 * Truncated EI: the integral of (f - y*) N(f; mu, sigma^2) over [lo, hi].
 *
 * Equals EI when [lo, hi] = [y*, inf), which is what truncation_limits gives
 * for the unbounded envelope.
 */
inline double tei(const PredictiveMoments& m, double y_star, const TruncationLimits& lim) {
  if (!(lim.lo <= lim.hi)) throw DomainError("tei: lo must be <= hi");
  if (!(m.sigma > 0.0)) return (m.mu >= lim.lo && m.mu <= lim.hi) ? std::max(m.mu - y_star, 0.0) : 0.0;
  if (lim.lo == lim.hi) return 0.0;
  const double z_star = (m.mu - y_star) / m.sigma;
  const double z_lo = z_limit(m.mu, m.sigma, lim.lo);
  const double z_hi = z_limit(m.mu, m.sigma, lim.hi);
  return m.sigma * z_star * normal_cdf_diff(z_lo, z_hi) + m.sigma * (normal_pdf(z_lo) - normal_pdf(z_hi));
}

/// Truncated PI: P(lo < f <= hi) = Phi(z(lo)) - Phi(z(hi)).
inline double tpi(const PredictiveMoments& m, const TruncationLimits& lim) {
  if (!(lim.lo <= lim.hi)) throw DomainError("tpi: lo must be <= hi");
  if (!(m.sigma > 0.0)) return (m.mu > lim.lo && m.mu <= lim.hi) ? 1.0 : 0.0;
  return normal_cdf_diff(z_limit(m.mu, m.sigma, lim.lo), z_limit(m.mu, m.sigma, lim.hi));
}

inline double tucb(double ucb_value, const EnvelopeValues& env) { return std::min(ucb_value, env.upper); }

/// g if it lies in the closed envelope [f^l, f^u], else -inf.
inline double accept_reject(double g_value, const EnvelopeValues& env) {
  return (g_value >= env.lower && g_value <= env.upper) ? g_value : -kInf;
}

// beta_t schedules.

/// beta_t = c * d * log(2t).
struct PracticalBeta {
  double c = 0.2;
};
/// beta_t from the finite-space regret theorem. `srinivas` switches from the
/// literal reading beta^{1/2} = 2 log(|D| pi_t / delta) to beta = 2 log(...).
struct TheoremBeta {
  double space_size = 1.0;
  double delta = 0.1;
  bool srinivas = false;
};
/// A fixed beta, e.g. the 1e16 misspecification stress test.
struct ConstantBeta {
  double value = 1.0;
};
using BetaSchedule = std::variant<PracticalBeta, TheoremBeta, ConstantBeta>;

inline double beta_schedule(std::size_t t, std::size_t dim, const BetaSchedule& kind) {
  if (t < 1) throw DomainError("beta_schedule: t must be >= 1");
  const double td = static_cast<double>(t);
  if (const auto* p = std::get_if<PracticalBeta>(&kind)) return p->c * static_cast<double>(dim) * std::log(2.0 * td);
  if (const auto* th = std::get_if<TheoremBeta>(&kind)) {
    const double pi_t = std::numbers::pi * std::numbers::pi * td * td / 6.0;
    const double core = 2.0 * std::log(th->space_size * pi_t / th->delta);
    return th->srinivas ? core : core * core;
  }
  return std::get<ConstantBeta>(kind).value;
}

// Acquisition choice.

enum class BaseAcquisition { UCB, TS, EI, PI, Random };
enum class LboMode { None, Truncated, AcceptReject };

struct AcquisitionSpec {
  BaseAcquisition base = BaseAcquisition::EI;
  LboMode lbo = LboMode::None;
  BetaSchedule beta = PracticalBeta{};

  /// Truncation pairs with EI/PI/UCB, accept-reject with UCB/TS.
  bool valid() const {
    switch (lbo) {
      case LboMode::None:
        return true;
      case LboMode::Truncated:
        return base == BaseAcquisition::EI || base == BaseAcquisition::PI || base == BaseAcquisition::UCB;
      case LboMode::AcceptReject:
        return base == BaseAcquisition::UCB || base == BaseAcquisition::TS;
    }
    return false;
  }

  void validate() const {
    if (!valid()) throw ConfigError("acquisition: invalid base/LBO pairing " + name());
  }

  /// Display name: EI, TEI, TPI, TUCB, AR-UCB, AR-TS, ...
  std::string name() const {
    std::string b;
    switch (base) {
      case BaseAcquisition::UCB: b = "UCB"; break;
      case BaseAcquisition::TS: b = "TS"; break;
      case BaseAcquisition::EI: b = "EI"; break;
      case BaseAcquisition::PI: b = "PI"; break;
      case BaseAcquisition::Random: return "Random";
    }
    switch (lbo) {
      case LboMode::None: return b;
      case LboMode::Truncated: return "T" + b;
      case LboMode::AcceptReject: return "AR-" + b;
    }
    return b;
  }
};

}  // namespace lipbo::acq

#endif  // LIPBO_ACQUISITION_ACQUISITION_HPP
