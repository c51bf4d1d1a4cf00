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

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "lipbo/acquisition/acquisition.hpp"

namespace lipbo::acq {
namespace {

// Integral of g(f) N(f; mu, sigma^2) over [lo, hi], restricted to mu +- 40 sigma.
template <class G>
double gaussian_integral(double mu, double sigma, double lo, double hi, G g) {
  const double a = std::max(lo, mu - 40.0 * sigma);
  const double b = std::min(hi, mu + 40.0 * sigma);
  if (!(a < b)) return 0.0;
  auto integrand = [&](double f) {
    const double u = (f - mu) / sigma;
    return g(f) * std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 12, 1e-12);
}

TEST(ZScore, Values) {
  EXPECT_DOUBLE_EQ(z_score(1.0, 2.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(z_score(1.0, 2.0, 1.0), 0.0);
  EXPECT_LT(z_score(1.0, 2.0, 1.5), 0.0);
  EXPECT_GT(z_score(1.0, 2.0, 0.5), 0.0);
  EXPECT_THROW(z_score(1.0, 0.0, 0.0), DomainError);
}

TEST(Ucb, Values) {
  EXPECT_DOUBLE_EQ(ucb({0.7, 0.0}, 9.0), 0.7);
  EXPECT_DOUBLE_EQ(ucb({0.7, 3.0}, 0.0), 0.7);
  EXPECT_DOUBLE_EQ(ucb({0.0, 1.0}, 4.0), 2.0);
  EXPECT_DOUBLE_EQ(ucb({0.0, 1.0}, 1e16), 1e8);
  EXPECT_THROW(ucb({0.0, 1.0}, -1.0), DomainError);
}

TEST(Ei, AtIncumbentIsDensityAtZero) {
  const double oracle = gaussian_integral(0.0, 1.0, 0.0, kInf, [](double f) { return f; });
  EXPECT_NEAR(ei({0.0, 1.0}, 0.0), oracle, 1e-10);
  EXPECT_NEAR(ei({0.0, 1.0}, 0.0), 0.3989422804014327, 1e-12);
}

TEST(Ei, ZeroSigmaLimit) {
  EXPECT_EQ(ei({-1.0, 0.0}, 0.0), 0.0);
  EXPECT_EQ(ei({2.0, 0.0}, 0.5), 1.5);
}

TEST(Ei, NonNegativeAndAboveMeanGain) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0), s(1e-3, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const PredictiveMoments m{u(rng), s(rng)};
    const double y = u(rng);
    EXPECT_GE(ei(m, y), 0.0);
    EXPECT_GE(ei(m, y), m.mu - y - 1e-12);
  }
}

TEST(Pi, Values) {
  EXPECT_DOUBLE_EQ(pi({1.0, 2.0}, 1.0), 0.5);
  EXPECT_NEAR(pi({2.0, 1.0}, 0.0), 0.9772498680518208, 1e-12);
  EXPECT_EQ(pi({1.0, 0.0}, 1.0), 1.0);
  EXPECT_EQ(pi({0.9, 0.0}, 1.0), 0.0);
  double prev = 0.0;
  for (double mu = -3.0; mu <= 3.0; mu += 0.1) {
    const double v = pi({mu, 0.7}, 0.2);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(TruncationLimits, Cases) {
  const EnvelopeValues env{-1.0, 1.0};
  auto lim = truncation_limits(env, 0.0);
  EXPECT_EQ(lim.lo, 0.0);
  EXPECT_EQ(lim.hi, 1.0);
  lim = truncation_limits(env, 2.0);
  EXPECT_EQ(lim.lo, 1.0);
  EXPECT_EQ(lim.hi, 1.0);
  lim = truncation_limits(env, -2.0);
  EXPECT_EQ(lim.lo, -1.0);
  EXPECT_EQ(lim.hi, 1.0);
  lim = truncation_limits(EnvelopeValues{}, 0.3);
  EXPECT_EQ(lim.lo, 0.3);
  EXPECT_EQ(lim.hi, kInf);
  lim = truncation_limits(EnvelopeValues{2.0, 1.0}, 0.0);
  EXPECT_EQ(lim.lo, lim.hi);
}

TEST(Tei, UnboundedEnvelopeIsEi) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0), s(1e-3, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const PredictiveMoments m{u(rng), s(rng)};
    const double y = u(rng);
    EXPECT_NEAR(tei(m, y, truncation_limits(EnvelopeValues{}, y)), ei(m, y), 1e-10);
  }
}

TEST(Tei, RejectedPointIsZero) {
  EXPECT_EQ(tei({0.3, 1.0}, 1.0, {1.0, 1.0}), 0.0);
  EXPECT_EQ(tei({0.3, 1.0}, 2.0, truncation_limits({-1.0, 1.0}, 2.0)), 0.0);
}

TEST(Tei, BoundedIntervalMatchesQuadrature) {
  const double oracle = gaussian_integral(0.0, 1.0, 0.0, 2.0, [](double f) { return f; });
  EXPECT_NEAR(tei({0.0, 1.0}, 0.0, {0.0, 2.0}), oracle, 1e-8);
  EXPECT_NEAR(oracle, (1.0 - std::exp(-2.0)) / std::sqrt(2.0 * std::numbers::pi), 1e-12);
}

TEST(Tei, RandomInputsMatchQuadrature) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0), ls(std::log(1e-3), std::log(10.0)), w(0.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const PredictiveMoments m{u(rng), std::exp(ls(rng))};
    const double y = u(rng);
    const double lo = y + w(rng) * m.sigma * (i % 3);
    const double hi = (i % 5 == 0) ? kInf : lo + w(rng) * m.sigma * 2.0;
    const double oracle = gaussian_integral(m.mu, m.sigma, lo, hi, [y](double f) { return f - y; });
    EXPECT_NEAR(tei(m, y, {lo, hi}), oracle, 1e-6);
    EXPECT_GE(tei(m, y, {lo, hi}), -1e-15);  // lo >= y*
  }
}

TEST(Tei, ZeroSigmaLimit) {
  EXPECT_EQ(tei({0.5, 0.0}, 0.0, {0.0, 1.0}), 0.5);
  EXPECT_EQ(tei({1.5, 0.0}, 0.0, {0.0, 1.0}), 0.0);
  EXPECT_THROW(tei({0.0, 1.0}, 0.0, {1.0, 0.0}), DomainError);
}

TEST(Tpi, Reductions) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 5.0), s(1e-3, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const PredictiveMoments m{u(rng), s(rng)};
    const double y = u(rng);
    EXPECT_NEAR(tpi(m, {y, kInf}), pi(m, y), 1e-10);
  }
  EXPECT_EQ(tpi({0.0, 1.0}, {0.4, 0.4}), 0.0);
  EXPECT_NEAR(tpi({0.0, 1.0}, {-1.0, 1.0}), 0.6826894921370859, 1e-12);
}

TEST(Tpi, RandomInputsMatchQuadrature) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5.0, 5.0), ls(std::log(1e-3), std::log(10.0)), w(0.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const PredictiveMoments m{u(rng), std::exp(ls(rng))};
    const double lo = m.mu + (u(rng) / 2.0) * m.sigma;
    const double hi = (i % 4 == 0) ? kInf : lo + w(rng) * m.sigma;
    const double oracle = gaussian_integral(m.mu, m.sigma, lo, hi, [](double) { return 1.0; });
    const double v = tpi(m, {lo, hi});
    EXPECT_NEAR(v, oracle, 1e-6);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Tpi, WideningNeverDecreases) {
  const PredictiveMoments m{0.2, 0.8};
  double prev = 0.0;
  for (double w = 0.0; w < 5.0; w += 0.25) {
    const double v = tpi(m, {0.1 - w, 0.1 + w});
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Tpi, ZeroSigmaIndicator) {
  EXPECT_EQ(tpi({0.5, 0.0}, {0.0, 1.0}), 1.0);
  EXPECT_EQ(tpi({0.0, 0.0}, {0.0, 1.0}), 0.0);
  EXPECT_EQ(tpi({1.0, 0.0}, {0.0, 1.0}), 1.0);
}

TEST(Tucb, Clips) {
  EXPECT_EQ(tucb(3.0, {0.0, 2.0}), 2.0);
  EXPECT_EQ(tucb(1.0, {0.0, 2.0}), 1.0);
  EXPECT_EQ(tucb(1.0, EnvelopeValues{}), 1.0);
}

TEST(AcceptReject, ClosedInterval) {
  EXPECT_EQ(accept_reject(0.5, {-1.0, 1.0}), 0.5);
  EXPECT_EQ(accept_reject(1.5, {-1.0, 1.0}), -kInf);
  EXPECT_EQ(accept_reject(1.0, {-1.0, 1.0}), 1.0);
  EXPECT_EQ(accept_reject(-1.0, {-1.0, 1.0}), -1.0);
  EXPECT_EQ(accept_reject(-1.5, {-1.0, 1.0}), -kInf);
}

TEST(Rejection, NullityWhenIncumbentAboveUpper) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-5.0, 5.0), s(1e-3, 10.0), gap(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const EnvelopeValues env{u(rng) - 6.0, u(rng)};
    const double y = env.upper + gap(rng);
    const PredictiveMoments m{u(rng), s(rng)};
    const auto lim = truncation_limits(env, y);
    EXPECT_EQ(tpi(m, lim), 0.0);
    EXPECT_EQ(tei(m, y, lim), 0.0);
    EXPECT_EQ(accept_reject(env.upper + 1e-9 + gap(rng), env), -kInf);
    EXPECT_LE(tucb(ucb(m, 2.0), env), y);
  }
}

TEST(Beta, PracticalSchedule) {
  EXPECT_NEAR(beta_schedule(1, 2, PracticalBeta{}), 0.4 * std::log(2.0), 1e-15);
  EXPECT_NEAR(beta_schedule(1, 2, PracticalBeta{}), 0.2773, 1e-4);
}

TEST(Beta, TheoremSchedule) {
  const double core = 2.0 * std::log(100.0 * (std::numbers::pi * std::numbers::pi / 6.0) / 0.1);
  EXPECT_NEAR(beta_schedule(1, 1, TheoremBeta{100.0, 0.1}), core * core, 1e-12);
  EXPECT_NEAR(beta_schedule(1, 1, TheoremBeta{100.0, 0.1, true}), core, 1e-12);
}

TEST(Beta, NondecreasingInT) {
  for (const BetaSchedule& kind : {BetaSchedule{PracticalBeta{}}, BetaSchedule{TheoremBeta{50.0}},
                                   BetaSchedule{TheoremBeta{50.0, 0.1, true}}, BetaSchedule{ConstantBeta{1e16}}}) {
    double prev = 0.0;
    for (std::size_t t = 1; t < 200; ++t) {
      const double b = beta_schedule(t, 3, kind);
      EXPECT_GE(b, prev);
      prev = b;
    }
  }
  EXPECT_EQ(beta_schedule(7, 2, ConstantBeta{1e16}), 1e16);
  EXPECT_THROW(beta_schedule(0, 2, PracticalBeta{}), DomainError);
}

TEST(AcquisitionSpec, PairingsAndNames) {
  EXPECT_EQ((AcquisitionSpec{BaseAcquisition::EI, LboMode::Truncated}.name()), "TEI");
  EXPECT_EQ((AcquisitionSpec{BaseAcquisition::PI, LboMode::Truncated}.name()), "TPI");
  EXPECT_EQ((AcquisitionSpec{BaseAcquisition::UCB, LboMode::Truncated}.name()), "TUCB");
  EXPECT_EQ((AcquisitionSpec{BaseAcquisition::UCB, LboMode::AcceptReject}.name()), "AR-UCB");
  EXPECT_EQ((AcquisitionSpec{BaseAcquisition::TS, LboMode::AcceptReject}.name()), "AR-TS");
  EXPECT_EQ((AcquisitionSpec{BaseAcquisition::TS, LboMode::None}.name()), "TS");
  EXPECT_FALSE((AcquisitionSpec{BaseAcquisition::TS, LboMode::Truncated}.valid()));
  EXPECT_FALSE((AcquisitionSpec{BaseAcquisition::EI, LboMode::AcceptReject}.valid()));
  EXPECT_THROW((AcquisitionSpec{BaseAcquisition::PI, LboMode::AcceptReject}.validate()), ConfigError);
}

}  // namespace
}  // namespace lipbo::acq
