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
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "lipbo/gp/fit.hpp"
#include "lipbo/gp/kernel.hpp"
#include "lipbo/gp/posterior.hpp"

namespace lipbo::gp {
namespace {

Point P1(double x) { return Point::Constant(1, x); }

std::vector<Point> random_points(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Point x(static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = u(rng);
    pts.push_back(x);
  }
  return pts;
}

ObservationHistory smooth_history(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pts = random_points(n, d, rng);
  std::vector<double> ys;
  for (const auto& p : pts) ys.push_back(std::sin(3.0 * p.sum()) + 0.5 * p.squaredNorm());
  return ObservationHistory(pts, ys);
}

TEST(Kernel, SelfCovarianceIsSignalVariance) {
  const auto p = KernelParams::isotropic(3, 0.7, 1.9);
  const Point a = Eigen::Vector3d(0.1, -2.0, 4.0);
  EXPECT_DOUBLE_EQ(kernel_eval(p, a, a), 1.9 * 1.9);
}

TEST(Kernel, MaternClosedFormAtUnitDistance) {
  const auto p = KernelParams::isotropic(1, 1.0, 1.0);
  const long double s5 = std::sqrt(5.0L);
  const long double expected = std::exp(-s5) * (1.0L + s5 + 5.0L / 3.0L);
  EXPECT_NEAR(kernel_eval(p, P1(0.0), P1(1.0)), static_cast<double>(expected), 1e-15);
}

TEST(Kernel, AnisotropicScaledDistance) {
  KernelParams p;
  p.length_scales = Eigen::Vector2d(0.5, 2.0);
  // r^2 = (1/0.5)^2 + (2/2)^2 = 5.
  const double r = std::sqrt(5.0);
  const double expected = std::exp(-std::sqrt(5.0) * r) * (1.0 + std::sqrt(5.0) * r + 5.0 * 5.0 / 3.0);
  EXPECT_NEAR(kernel_eval(p, Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 2.0)), expected, 1e-15);
}

TEST(Kernel, SquaredExponentialClosedForm) {
  auto p = KernelParams::isotropic(1, 0.5, 2.0);
  p.kind = KernelKind::SquaredExponential;
  EXPECT_NEAR(kernel_eval(p, P1(0.0), P1(1.0)), 4.0 * std::exp(-2.0), 1e-15);
}

TEST(Kernel, DecaysToZeroFarAway) {
  const auto p = KernelParams::isotropic(2, 0.3);
  EXPECT_LT(kernel_eval(p, Eigen::Vector2d(0, 0), Eigen::Vector2d(100, 100)), 1e-100);
}

TEST(Kernel, RejectsBadInputs) {
  const auto p = KernelParams::isotropic(2, 0.3);
  EXPECT_THROW(kernel_eval(p, P1(0.0), Eigen::Vector2d(0, 0)), DimensionError);
  EXPECT_THROW(kernel_eval(p, Eigen::Vector2d(0, std::nan("")), Eigen::Vector2d(0, 0)), DomainError);
  KernelParams bad = KernelParams::isotropic(1, -1.0);
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Kernel, SymmetricAndPositiveSemidefinite) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    auto pts = random_points(n, 3, rng);
    KernelParams p;
    p.length_scales = Eigen::Vector3d(0.1 + trial * 0.01, 0.4, 1.3);
    p.signal_scale = 0.5 + trial * 0.05;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(kernel_eval(p, pts[i], pts[j]), kernel_eval(p, pts[j], pts[i]));
    const Eigen::MatrixXd k = kernel_matrix(p, pts);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(LogMarginalLikelihood, SingleZeroObservation) {
  KernelParams p = KernelParams::isotropic(1, 1.0, 1.0, 0.0);
  ObservationHistory h({P1(0.3)}, {0.0});
  EXPECT_NEAR(log_marginal_likelihood(h, p), -0.5 * std::log(2.0 * std::numbers::pi), 1e-12);
}

TEST(LogMarginalLikelihood, TwoPointClosedForm) {
  KernelParams p = KernelParams::isotropic(1, 0.4, 1.3, 0.1);
  ObservationHistory h({P1(0.0), P1(0.5)}, {0.7, -0.2});
  const double a = 1.3 * 1.3 + 0.01;
  const double b = kernel_eval(p, P1(0.0), P1(0.5));
  const double det = a * a - b * b;
  const double y1 = 0.7, y2 = -0.2;
  const double quad = (a * y1 * y1 - 2.0 * b * y1 * y2 + a * y2 * y2) / det;
  const double expected = -0.5 * quad - 0.5 * std::log(det) - std::log(2.0 * std::numbers::pi);
  EXPECT_NEAR(log_marginal_likelihood(h, p), expected, 1e-12);
}

TEST(LogMarginalLikelihood, QuadraticTermScalesWithSquare) {
  const auto h = smooth_history(6, 2, 3);
  const auto p = KernelParams::isotropic(2, 0.3);
  std::vector<double> zero(6, 0.0), scaled;
  for (double y : h.values()) scaled.push_back(3.0 * y);
  const double base = log_marginal_likelihood(h.with_values(zero), p);
  const double q1 = base - log_marginal_likelihood(h, p);
  const double q3 = base - log_marginal_likelihood(h.with_values(scaled), p);
  EXPECT_NEAR(q3, 9.0 * q1, 1e-6 * std::abs(q3));
}

TEST(LogMarginalLikelihood, WorkspaceMatchesDirect) {
  const auto h = smooth_history(12, 3, 4);
  KernelParams p;
  p.length_scales = Eigen::Vector3d(0.2, 0.5, 0.9);
  p.signal_scale = 1.4;
  detail::LikelihoodWorkspace ws(h, p.kind);
  EXPECT_NEAR(ws.log_marginal_likelihood(p.length_scales, p.signal_scale, p.noise_sd), log_marginal_likelihood(h, p),
              1e-8);
}

TEST(Posterior, EmptyHistoryIsPrior) {
  const auto post = build_posterior(ObservationHistory(2), KernelParams::isotropic(2, 0.3, 1.7));
  const auto m = post.predict(Eigen::Vector2d(0.4, 9.0));
  EXPECT_EQ(m.mu, 0.0);
  EXPECT_EQ(m.sigma, 1.7);
}

TEST(Posterior, SinglePointFactorIsScalar) {
  const auto p = KernelParams::isotropic(1, 0.3, 1.2);
  const auto post = build_posterior(ObservationHistory({P1(0.1)}, {2.0}), p);
  ASSERT_EQ(post.chol_factor().rows(), 1);
  EXPECT_NEAR(post.chol_factor()(0, 0), std::sqrt(1.44 + 1e-6), 1e-15);
}

TEST(Posterior, FactorReproducesCovariance) {
  const auto h = smooth_history(3, 2, 11);
  const auto p = KernelParams::isotropic(2, 0.4);
  const auto post = build_posterior(h, p);
  Eigen::MatrixXd k = kernel_matrix(p, h.points());
  k.diagonal().array() += p.noise_variance();
  const Eigen::MatrixXd l = post.chol_factor();
  EXPECT_LE((l * l.transpose() - k).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Posterior, InterpolatesTrainingPoints) {
  const auto h = smooth_history(15, 2, 5);
  const auto post = build_posterior(h, KernelParams::isotropic(2, 0.3));
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto m = post.predict(h.point(i));
    EXPECT_NEAR(m.mu, h.value(i), 1e-5);
    EXPECT_LT(m.sigma, 1e-2);
  }
}

TEST(Posterior, RevertsToPriorFarAway) {
  const auto h = smooth_history(5, 1, 6);
  const auto post = build_posterior(h, KernelParams::isotropic(1, 0.2, 1.5));
  const auto m = post.predict(P1(1e3));
  EXPECT_NEAR(m.mu, 0.0, 1e-12);
  EXPECT_NEAR(m.sigma, 1.5, 1e-12);
}

TEST(Posterior, TwoPointPredictionMatchesClosedForm) {
  const auto p = KernelParams::isotropic(1, 0.6, 1.1, 0.05);
  ObservationHistory h({P1(0.0), P1(1.0)}, {1.0, -0.5});
  const auto post = build_posterior(h, p);
  const double a = 1.21 + 0.0025;
  const double b = kernel_eval(p, P1(0.0), P1(1.0));
  const double det = a * a - b * b;
  const Point x = P1(0.3);
  const double k1 = kernel_eval(p, x, P1(0.0)), k2 = kernel_eval(p, x, P1(1.0));
  // (K + s^2 I)^{-1} = [a -b; -b a] / det
  const double w1 = (a * k1 - b * k2) / det, w2 = (-b * k1 + a * k2) / det;
  const double mu = w1 * 1.0 + w2 * -0.5;
  const double var = 1.21 - (k1 * w1 + k2 * w2);
  const auto m = post.predict(x);
  EXPECT_NEAR(m.mu, mu, 1e-8);
  EXPECT_NEAR(m.sigma, std::sqrt(var), 1e-8);
}

TEST(Posterior, SigmaNeverExceedsPrior) {
  const auto h = smooth_history(10, 2, 8);
  const auto post = build_posterior(h, KernelParams::isotropic(2, 0.3, 1.3));
  std::mt19937_64 rng(9);
  for (const auto& x : random_points(200, 2, rng)) {
    const auto m = post.predict(x);
    EXPECT_GE(m.sigma, 0.0);
    EXPECT_LE(m.sigma, 1.3 + 1e-12);
  }
}

TEST(Posterior, AddingObservationShrinksVariance) {
  std::mt19937_64 rng(10);
  const auto h = smooth_history(12, 2, 12);
  const auto p = KernelParams::isotropic(2, 0.3);
  auto post = build_posterior(ObservationHistory(2), p);
  const auto probes = random_points(50, 2, rng);
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto next = post.updated(h.point(i), h.value(i));
    for (const auto& x : probes) EXPECT_LE(next.predict(x).sigma, post.predict(x).sigma + 1e-8);
    post = std::move(next);
  }
}

TEST(Posterior, UpdateEqualsRebuild) {
  const auto h = smooth_history(6, 2, 13);
  const auto p = KernelParams::isotropic(2, 0.35);
  std::vector<Point> first(h.points().begin(), h.points().begin() + 5);
  std::vector<double> fy(h.values().begin(), h.values().begin() + 5);
  const auto updated = build_posterior(ObservationHistory(first, fy), p).updated(h.point(5), h.value(5));
  const auto rebuilt = build_posterior(h, p);
  std::mt19937_64 rng(14);
  for (const auto& x : random_points(30, 2, rng)) {
    EXPECT_NEAR(updated.predict(x).mu, rebuilt.predict(x).mu, 1e-8);
    EXPECT_NEAR(updated.predict(x).sigma, rebuilt.predict(x).sigma, 1e-8);
  }
}

TEST(Posterior, TenUpdatesMatchBatch) {
  const auto h = smooth_history(10, 3, 15);
  const auto p = KernelParams::isotropic(3, 0.5);
  auto post = build_posterior(ObservationHistory(3), p);
  for (std::size_t i = 0; i < h.size(); ++i) post = rank_one_update(post, h.point(i), h.value(i));
  const auto batch = build_posterior(h, p);
  EXPECT_LE((post.alpha() - batch.alpha()).cwiseAbs().maxCoeff(), 1e-6);
  std::mt19937_64 rng(16);
  for (const auto& x : random_points(20, 3, rng)) EXPECT_NEAR(post.predict(x).mu, batch.predict(x).mu, 1e-6);
}

TEST(Posterior, UpdateRebuildPropertyOnRandomHistories) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(2, 20), dim(1, 4);
  for (int trial = 0; trial < 25; ++trial) {
    const auto n = static_cast<std::size_t>(len(rng));
    const auto d = static_cast<std::size_t>(dim(rng));
    const auto h = smooth_history(n, d, 100 + static_cast<std::uint64_t>(trial));
    const auto p = KernelParams::isotropic(d, 0.3 + 0.02 * trial);
    auto post = build_posterior(ObservationHistory(d), p);
    for (std::size_t i = 0; i < n; ++i) post = post.updated(h.point(i), h.value(i));
    const auto batch = build_posterior(h, p);
    for (const auto& x : random_points(10, d, rng)) {
      EXPECT_NEAR(post.predict(x).mu, batch.predict(x).mu, 1e-6);
      EXPECT_NEAR(post.predict(x).sigma, batch.predict(x).sigma, 1e-6);
    }
  }
}

TEST(Posterior, DuplicateUpdateKeepsPredictions) {
  const auto h = smooth_history(5, 2, 18);
  const auto p = KernelParams::isotropic(2, 0.3);
  const auto post = build_posterior(h, p);
  const auto dup = post.updated(h.point(2), h.value(2));
  std::mt19937_64 rng(19);
  for (const auto& x : random_points(20, 2, rng)) EXPECT_NEAR(dup.predict(x).mu, post.predict(x).mu, 1e-6);
}

TEST(Posterior, DimensionMismatchThrows) {
  const auto post = build_posterior(smooth_history(3, 2, 1), KernelParams::isotropic(2, 0.3));
  EXPECT_THROW(post.predict(P1(0.0)), DimensionError);
  EXPECT_THROW(build_posterior(smooth_history(3, 2, 1), KernelParams::isotropic(3, 0.3)), DimensionError);
}

TEST(SampleJoint, AtTrainingPointReturnsObservation) {
  const auto h = smooth_history(4, 1, 20);
  const auto post = build_posterior(h, KernelParams::isotropic(1, 0.3));
  const auto s = sample_joint(post, {h.point(1)}, 21);
  EXPECT_NEAR(s[0], h.value(1), 1e-2);
}

TEST(SampleJoint, MonteCarloMeanMatchesPosterior) {
  const auto h = smooth_history(4, 1, 22);
  const auto post = build_posterior(h, KernelParams::isotropic(1, 0.2));
  const Point x = P1(0.77);
  const auto m = post.predict(x);
  std::mt19937_64 rng(23);
  double sum = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) sum += post.sample_joint({x}, rng)[0];
  EXPECT_NEAR(sum / n, m.mu, 3.0 * m.sigma / 100.0);
}

TEST(SampleJoint, IdenticalCandidatesShareValue) {
  const auto h = smooth_history(4, 2, 24);
  const auto post = build_posterior(h, KernelParams::isotropic(2, 0.3));
  const Point a = Eigen::Vector2d(0.3, 0.3), b = Eigen::Vector2d(0.9, 0.1);
  const auto s = post.sample_joint({a, b, a, b, a}, std::uint64_t{25});
  EXPECT_EQ(s[0], s[2]);
  EXPECT_EQ(s[0], s[4]);
  EXPECT_EQ(s[1], s[3]);
  EXPECT_NE(s[0], s[1]);
}

TEST(SampleJoint, DeterministicGivenSeed) {
  const auto h = smooth_history(6, 2, 26);
  const auto post = build_posterior(h, KernelParams::isotropic(2, 0.3));
  std::mt19937_64 rng(27);
  const auto cands = random_points(50, 2, rng);
  EXPECT_EQ(post.sample_joint(cands, std::uint64_t{5}), post.sample_joint(cands, std::uint64_t{5}));
}

TEST(SampleJoint, PriorDrawsWithoutHistory) {
  const auto post = build_posterior(ObservationHistory(1), KernelParams::isotropic(1, 0.3));
  const auto s = post.sample_joint({P1(0.0), P1(0.5)}, std::uint64_t{1});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_THROW(post.sample_joint({}, std::uint64_t{1}), Error);
}

TEST(Fit, RecoversGeneratingLengthScale) {
  std::vector<Point> pts;
  for (int i = 0; i < 50; ++i) pts.push_back(P1(i / 49.0));
  const auto prior = build_posterior(ObservationHistory(1), KernelParams::isotropic(1, 0.3, 1.0));
  int within = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ys = prior.sample_joint(pts, seed);
    FitConfig cfg;
    cfg.seed = seed;
    const auto fit = fit_hyperparams(ObservationHistory(pts, ys), cfg);
    const double ls = fit.params.length_scales[0];
    within += (ls > 0.15 && ls < 0.6) ? 1 : 0;
  }
  EXPECT_GE(within, 4);
}

TEST(Fit, ConstantValuesShrinkSignalScale) {
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(P1(i / 7.0));
  const auto fit = fit_hyperparams(ObservationHistory(pts, std::vector<double>(8, 0.0)), FitConfig{});
  EXPECT_LT(fit.params.signal_scale, 1.0);
}

TEST(Fit, MoreStartsNeverWorse) {
  const auto h = smooth_history(15, 2, 28);
  FitConfig one;
  one.starts = 1;
  FitConfig five = one;
  five.starts = 5;
  const auto a = fit_hyperparams(h, one);
  const auto b = fit_hyperparams(h, five);
  EXPECT_GE(b.log_posterior, a.log_posterior);
}

TEST(Fit, ReturnsBestOfStartsAndIsDeterministic) {
  const auto h = smooth_history(15, 2, 29);
  FitConfig cfg;
  cfg.seed = 3;
  const auto a = fit_hyperparams(h, cfg);
  const auto b = fit_hyperparams(h, cfg);
  EXPECT_EQ(a.params.length_scales, b.params.length_scales);
  EXPECT_EQ(a.params.signal_scale, b.params.signal_scale);
  const double at_best = log_marginal_likelihood(h, a.params) + log_hyperprior(a.params, [] {
    FitConfig c;
    c.length_scale_mode = Eigen::Vector2d::Constant(0.25);
    return c;
  }());
  EXPECT_NEAR(at_best, a.log_posterior, 1e-6);
  const double at_mode = log_marginal_likelihood(h, KernelParams::isotropic(2, 0.25)) +
                         log_hyperprior(KernelParams::isotropic(2, 0.25), cfg);
  EXPECT_GE(a.log_posterior, at_mode);
}

TEST(Fit, WarningWhenNothingImproves) {
  const auto h = smooth_history(10, 1, 30);
  const auto optimum = fit_hyperparams(h, FitConfig{});
  FitConfig cfg;
  cfg.starts = 1;
  cfg.max_evals_per_start = 1;  // the initial simplex only
  cfg.warm_start = optimum.params;
  const auto fit = fit_hyperparams(h, cfg);
  EXPECT_TRUE(fit.warning);
  EXPECT_NEAR(fit.params.length_scales[0], optimum.params.length_scales[0], 1e-12);
  EXPECT_NEAR(fit.params.signal_scale, optimum.params.signal_scale, 1e-12);
}

TEST(Fit, NeedsTwoObservations) {
  EXPECT_THROW(fit_hyperparams(ObservationHistory({P1(0.0)}, {1.0}), FitConfig{}), Error);
}

}  // namespace
}  // namespace lipbo::gp
