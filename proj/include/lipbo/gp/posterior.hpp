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

#ifndef LIPBO_GP_POSTERIOR_HPP
#define LIPBO_GP_POSTERIOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "lipbo/core/types.hpp"
#include "lipbo/gp/kernel.hpp"

namespace lipbo::gp {

struct PredictiveMoments {
  double mu = 0.0;
  double sigma = 0.0;
};

namespace detail {

// Extra diagonal jitter tried, relative to the signal variance, when a
// factorization fails. The first entry is "no extra jitter".
inline constexpr std::array<double, 5> kJitterLadder = {0.0, 1e-10, 1e-8, 1e-6, 1e-4};

struct Factorization {
  Eigen::MatrixXd lower;
  double extra_jitter = 0.0;
};

/// Cholesky of `a` (symmetric, noise already on the diagonal), escalating jitter on failure.
inline Factorization factorize(const Eigen::MatrixXd& a, double scale) {
  for (double rel : kJitterLadder) {
    const double jitter = rel * scale;
    Eigen::LLT<Eigen::MatrixXd> llt;
    if (jitter > 0.0) {
      Eigen::MatrixXd b = a;
      b.diagonal().array() += jitter;
      llt.compute(b);
    } else {
      llt.compute(a);
    }
    if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().allFinite()) {
      return {Eigen::MatrixXd(llt.matrixL()), jitter};
    }
  }
  throw FactorizationError("covariance matrix is not positive definite after maximum jitter");
}

}  // namespace detail

/**
 * Exact GP posterior over an observation history.
 *
 * Holds the lower Cholesky factor of (K + sigma^2 I) and the weight vector
 * alpha = (K + sigma^2 I)^{-1} y. Immutable once built; `updated` returns a
 * new posterior extended by one observation in O(t^2).
 */
class GpPosterior {
 public:
  static GpPosterior build(const ObservationHistory& history, const KernelParams& params) {
    params.validate();
    GpPosterior post;
    post.history_ = history;
    post.params_ = params;
    post.inv_ls2_ = detail::inverse_squared(params.length_scales);
    if (history.empty()) {
      post.history_ = ObservationHistory(params.dim());
      post.diag_add_ = params.noise_variance();
      return post;
    }
    if (history.dim() != params.dim()) throw DimensionError("build_posterior: history/params dimension mismatch");
    Eigen::MatrixXd k = kernel_matrix(params, history.points());
    k.diagonal().array() += params.noise_variance();
    auto fac = detail::factorize(k, params.prior_variance());
    post.chol_ = std::move(fac.lower);
    post.diag_add_ = params.noise_variance() + fac.extra_jitter;
    post.solve_alpha();
    return post;
  }

  PredictiveMoments predict(const Point& x) const {
    require_dim(x, params_.dim(), "predict");
    const double prior_var = params_.prior_variance();
    if (history_.empty()) return {0.0, params_.signal_scale};
    Eigen::VectorXd k = cross_covariance(x);
    const double mu = k.dot(alpha_);
    chol_.triangularView<Eigen::Lower>().solveInPlace(k);
    double var = prior_var - k.squaredNorm();
    if (var < 0.0) {
      if (var < -kVarianceTolerance * std::max(1.0, prior_var))
        throw FactorizationError("predict: negative posterior variance beyond tolerance");
      var = 0.0;
    }
    return {mu, std::sqrt(var)};
  }

  /// Posterior extended by (x, y); equivalent to rebuilding on the longer history.
  GpPosterior updated(const Point& x, double y) const {
    require_dim(x, params_.dim(), "rank_one_update");
    ObservationHistory extended = history_;
    extended.add(x, y);
    if (history_.empty()) return build(extended, params_);

    const Eigen::VectorXd kvec = cross_covariance(x);
    const Eigen::VectorXd l = chol_.triangularView<Eigen::Lower>().solve(kvec);
    const double d2 = params_.prior_variance() + diag_add_ - l.squaredNorm();
    if (!(d2 > 0.0) || !std::isfinite(d2)) return build(extended, params_);

    const Eigen::Index t = chol_.rows();
    GpPosterior post;
    post.history_ = std::move(extended);
    post.params_ = params_;
    post.inv_ls2_ = inv_ls2_;
    post.diag_add_ = diag_add_;
    post.chol_.setZero(t + 1, t + 1);
    post.chol_.topLeftCorner(t, t) = chol_;
    post.chol_.block(t, 0, 1, t) = l.transpose();
    post.chol_(t, t) = std::sqrt(d2);
    post.solve_alpha();
    return post;
  }

  /**
   * One joint draw from the posterior at `candidates`.
   *
   * Exactly repeated candidates share one coordinate of the draw, so they
   * get identical values.
   */
  std::vector<double> sample_joint(const std::vector<Point>& candidates, std::mt19937_64& rng) const {
    if (candidates.empty()) throw Error("sample_joint: no candidates");
    for (const auto& c : candidates) require_dim(c, params_.dim(), "sample_joint");

    // Exact duplicates map to the slot of their first occurrence.
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Point& pa = candidates[a];
      const Point& pb = candidates[b];
      for (Eigen::Index j = 0; j < pa.size(); ++j) {
        if (pa[j] != pb[j]) return pa[j] < pb[j];
      }
      return a < b;
    });
    std::vector<std::size_t> first_of(candidates.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const std::size_t idx = order[pos];
      const bool same_as_prev = pos > 0 && candidates[order[pos - 1]] == candidates[idx];
      first_of[idx] = same_as_prev ? first_of[order[pos - 1]] : idx;
    }
    std::vector<std::size_t> slot(candidates.size());
    std::vector<std::size_t> unique;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (first_of[i] == i) {
        slot[i] = unique.size();
        unique.push_back(i);
      } else {
        slot[i] = slot[first_of[i]];
      }
    }

    const auto m = static_cast<Eigen::Index>(unique.size());
    std::vector<Point> pts;
    pts.reserve(unique.size());
    for (std::size_t idx : unique) pts.push_back(candidates[idx]);

    Eigen::MatrixXd cov = kernel_matrix(params_, pts);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
    if (!history_.empty()) {
      const auto t = static_cast<Eigen::Index>(history_.size());
      Eigen::MatrixXd kxc(t, m);
      for (Eigen::Index c = 0; c < m; ++c) kxc.col(c) = cross_covariance(pts[static_cast<std::size_t>(c)]);
      mean = kxc.transpose() * alpha_;
      chol_.triangularView<Eigen::Lower>().solveInPlace(kxc);
      cov.noalias() -= kxc.transpose() * kxc;
    }
    cov.diagonal().array() += kSampleJitter * params_.prior_variance();
    const auto fac = detail::factorize(cov, params_.prior_variance());

    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < m; ++i) z[i] = normal(rng);
    const Eigen::VectorXd draw = mean + fac.lower * z;

    std::vector<double> out(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = draw[static_cast<Eigen::Index>(slot[i])];
    return out;
  }

  std::vector<double> sample_joint(const std::vector<Point>& candidates, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    return sample_joint(candidates, rng);
  }

  const ObservationHistory& history() const { return history_; }
  const KernelParams& params() const { return params_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  /// Total diagonal added to K: noise variance plus any factorization jitter.
  double diagonal_term() const { return diag_add_; }

 private:
  static constexpr double kVarianceTolerance = 1e-10;
  static constexpr double kSampleJitter = 1e-10;

  Eigen::VectorXd cross_covariance(const Point& x) const {
    const auto t = static_cast<Eigen::Index>(history_.size());
    Eigen::VectorXd k(t);
    const double s2 = params_.prior_variance();
    for (Eigen::Index i = 0; i < t; ++i) {
      k[i] = detail::kernel_from_r2(params_.kind, s2,
                                    detail::scaled_r2(inv_ls2_, history_.point(static_cast<std::size_t>(i)), x));
    }
    return k;
  }

  void solve_alpha() {
    const auto& ys = history_.values();
    alpha_ = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    chol_.triangularView<Eigen::Lower>().solveInPlace(alpha_);
    chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
  }

  ObservationHistory history_;
  KernelParams params_;
  Eigen::VectorXd inv_ls2_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double diag_add_ = 0.0;
};

inline GpPosterior build_posterior(const ObservationHistory& history, const KernelParams& params) {
  return GpPosterior::build(history, params);
}

inline PredictiveMoments predict(const GpPosterior& post, const Point& x) { return post.predict(x); }

inline GpPosterior rank_one_update(const GpPosterior& post, const Point& x, double y) { return post.updated(x, y); }

inline std::vector<double> sample_joint(const GpPosterior& post, const std::vector<Point>& candidates,
                                        std::uint64_t seed) {
  return post.sample_joint(candidates, seed);
}

/// log N(y; 0, K + sigma^2 I).
inline double log_marginal_likelihood(const ObservationHistory& history, const KernelParams& params) {
  params.validate();
  if (history.empty()) throw Error("log_marginal_likelihood: empty history");
  if (history.dim() != params.dim()) throw DimensionError("log_marginal_likelihood: dimension mismatch");
  Eigen::MatrixXd k = kernel_matrix(params, history.points());
  k.diagonal().array() += params.noise_variance();
  const auto fac = detail::factorize(k, params.prior_variance());
  const auto& ys = history.values();
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  fac.lower.triangularView<Eigen::Lower>().solveInPlace(a);
  const double quad = a.squaredNorm();
  const double log_det = 2.0 * fac.lower.diagonal().array().log().sum();
  const double n = static_cast<double>(ys.size());
  return -0.5 * quad - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace lipbo::gp

#endif  // LIPBO_GP_POSTERIOR_HPP
