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

#ifndef LIPBO_GP_FIT_HPP
#define LIPBO_GP_FIT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "lipbo/core/types.hpp"
#include "lipbo/gp/kernel.hpp"
#include "lipbo/gp/posterior.hpp"

namespace lipbo::gp {

/// MAP hyperparameter search settings. Noise is held fixed at `noise_sd`.
struct FitConfig {
  std::size_t starts = 5;
  // Objective evaluations per local search; 0 selects 25 * (number of free parameters + 1).
  std::size_t max_evals_per_start = 0;
  double noise_sd = kDefaultNoiseSd;
  KernelKind kind = KernelKind::Matern52;

  // Log-normal priors, parameterized by their mode. An empty length-scale
  // mode vector means 0.25 in every dimension (a unit box).
  Eigen::VectorXd length_scale_mode;
  double signal_scale_mode = 1.0;
  double prior_log_sd = 1.0;

  // Search box, as multiples of the prior modes.
  double length_scale_range = 1e3;
  double signal_scale_range = 1e3;

  std::uint64_t seed = 0;
  std::optional<KernelParams> warm_start;
};

struct FitResult {
  KernelParams params;
  double log_posterior = -kInf;
  bool warning = false;  // no start improved on the initialization
  std::size_t evaluations = 0;
};

namespace detail {

/// Minimizes `f` with the Nelder-Mead simplex method. Returns the best vertex and its value.
inline std::pair<Eigen::VectorXd, double> nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                                      const Eigen::VectorXd& x0, double step, std::size_t max_evals,
                                                      std::size_t& evals) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> fv(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) simplex[static_cast<std::size_t>(i + 1)][i] += step;
  std::size_t used = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++used;
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  };
  for (std::size_t i = 0; i < simplex.size(); ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> idx(simplex.size());
  while (used < max_evals) {
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = idx.front();
    const std::size_t worst = idx.back();
    const std::size_t second = idx[idx.size() - 2];
    if (std::isfinite(fv[worst]) && std::abs(fv[worst] - fv[best]) < 1e-8 * (1.0 + std::abs(fv[best]))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - simplex[worst]);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const Eigen::VectorXd xc =
        outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid)) : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      fv[i] = eval(simplex[i]);
    }
  }
  evals += used;
  const auto it = std::min_element(fv.begin(), fv.end());
  return {simplex[static_cast<std::size_t>(it - fv.begin())], *it};
}

/**
 * Log marginal likelihood evaluator for a fixed history with varying
 * hyperparameters. Per-dimension squared differences are cached, so each
 * evaluation costs one GEMV plus one Cholesky.
 */
class LikelihoodWorkspace {
 public:
  LikelihoodWorkspace(const ObservationHistory& history, KernelKind kind)
      : n_(static_cast<Eigen::Index>(history.size())), kind_(kind) {
    const auto d = static_cast<Eigen::Index>(history.dim());
    sqdiff_.resize(n_ * (n_ - 1) / 2, d);
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = 0; j < i; ++j, ++row) {
        sqdiff_.row(row) =
            (history.point(static_cast<std::size_t>(i)) - history.point(static_cast<std::size_t>(j))).array().square().matrix().transpose();
      }
    }
    const auto& ys = history.values();
    y_ = Eigen::Map<const Eigen::VectorXd>(ys.data(), n_);
    k_.resize(n_, n_);
  }

  /// Returns -inf when the kernel matrix cannot be factorized.
  double log_marginal_likelihood(const Eigen::VectorXd& length_scales, double signal_scale, double noise_sd) {
    const Eigen::VectorXd inv = inverse_squared(length_scales);
    const double s2 = signal_scale * signal_scale;
    r2_.noalias() = sqdiff_ * inv;
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      k_(i, i) = s2 + noise_sd * noise_sd;
      for (Eigen::Index j = 0; j < i; ++j, ++row) k_(i, j) = kernel_from_r2(kind_, s2, r2_[row]);
    }
    llt_.compute(k_);
    if (llt_.info() != Eigen::Success) return -kInf;
    Eigen::VectorXd a = llt_.matrixL().solve(y_);
    const double log_det = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
    const double v = -0.5 * a.squaredNorm() - 0.5 * log_det - 0.5 * static_cast<double>(n_) * std::log(2.0 * std::numbers::pi);
    return std::isfinite(v) ? v : -kInf;
  }

 private:
  Eigen::Index n_;
  KernelKind kind_;
  Eigen::MatrixXd sqdiff_;
  Eigen::VectorXd y_;
  Eigen::VectorXd r2_;
  Eigen::MatrixXd k_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Log density of a log-normal with the given mode, evaluated at value.
inline double log_normal_logpdf_by_mode(double value, double mode, double log_sd) {
  const double mu = std::log(mode) + log_sd * log_sd;
  const double lv = std::log(value);
  return -lv - std::log(log_sd * std::sqrt(2.0 * std::numbers::pi)) - (lv - mu) * (lv - mu) / (2.0 * log_sd * log_sd);
}

}  // namespace detail

/// Log-normal prior log density of the hyperparameters under `config`.
inline double log_hyperprior(const KernelParams& params, const FitConfig& config) {
  double lp = detail::log_normal_logpdf_by_mode(params.signal_scale, config.signal_scale_mode, config.prior_log_sd);
  for (Eigen::Index j = 0; j < params.length_scales.size(); ++j) {
    const double mode = config.length_scale_mode.size() > 0 ? config.length_scale_mode[j] : 0.25;
    lp += detail::log_normal_logpdf_by_mode(params.length_scales[j], mode, config.prior_log_sd);
  }
  return lp;
}

/**
 * Multi-start MAP estimate of (length scales, signal scale).
 *
 * Parameters are searched in log space inside a box around the prior modes.
 * The first start is `warm_start` (or the prior modes); the rest are drawn
 * from the prior using `seed`. The highest log posterior wins.
 */
inline FitResult fit_hyperparams(const ObservationHistory& history, const FitConfig& config) {
  if (history.size() < 2) throw Error("fit_hyperparams: need at least 2 observations");
  if (config.starts == 0) throw ConfigError("fit_hyperparams: starts must be >= 1");
  const auto d = static_cast<Eigen::Index>(history.dim());
  Eigen::VectorXd ls_mode = config.length_scale_mode.size() > 0 ? config.length_scale_mode : Eigen::VectorXd::Constant(d, 0.25);
  if (ls_mode.size() != d) throw DimensionError("fit_hyperparams: length_scale_mode dimension mismatch");

  // theta = (log l_1 .. log l_d, log sigma0)
  const Eigen::Index p = d + 1;
  Eigen::VectorXd lo(p), hi(p), mode(p);
  for (Eigen::Index j = 0; j < d; ++j) {
    mode[j] = std::log(ls_mode[j]);
    lo[j] = mode[j] - std::log(config.length_scale_range);
    hi[j] = mode[j] + std::log(config.length_scale_range);
  }
  mode[d] = std::log(config.signal_scale_mode);
  lo[d] = mode[d] - std::log(config.signal_scale_range);
  hi[d] = mode[d] + std::log(config.signal_scale_range);

  FitConfig prior_cfg = config;
  prior_cfg.length_scale_mode = ls_mode;
  auto to_params = [&](const Eigen::VectorXd& theta) {
    KernelParams kp;
    kp.length_scales = theta.head(d).array().exp().matrix();
    kp.signal_scale = std::exp(theta[d]);
    kp.noise_sd = config.noise_sd;
    kp.kind = config.kind;
    return kp;
  };

  detail::LikelihoodWorkspace ws(history, config.kind);
  auto neg_log_post = [&](const Eigen::VectorXd& theta) {
    for (Eigen::Index j = 0; j < p; ++j)
      if (theta[j] < lo[j] || theta[j] > hi[j]) return kInf;
    const KernelParams kp = to_params(theta);
    const double lml = ws.log_marginal_likelihood(kp.length_scales, kp.signal_scale, kp.noise_sd);
    if (!std::isfinite(lml)) return kInf;
    return -(lml + log_hyperprior(kp, prior_cfg));
  };

  Eigen::VectorXd init = mode;
  if (config.warm_start) {
    if (config.warm_start->dim() != static_cast<std::size_t>(d)) throw DimensionError("fit_hyperparams: warm start dimension");
    init.head(d) = config.warm_start->length_scales.array().log().matrix();
    init[d] = std::log(config.warm_start->signal_scale);
    init = init.cwiseMax(lo).cwiseMin(hi);
  }

  const std::size_t max_evals = config.max_evals_per_start > 0 ? config.max_evals_per_start
                                                                 : 25 * static_cast<std::size_t>(p + 1);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  FitResult result;
  const double init_value = neg_log_post(init);
  result.evaluations = 1;
  Eigen::VectorXd best_theta = init;
  double best_value = init_value;
  for (std::size_t s = 0; s < config.starts; ++s) {
    Eigen::VectorXd start = init;
    if (s > 0) {
      for (Eigen::Index j = 0; j < p; ++j) start[j] = mode[j] + config.prior_log_sd * normal(rng);
      start = start.cwiseMax(lo).cwiseMin(hi);
    }
    auto [theta, value] = detail::nelder_mead(neg_log_post, start, 0.5, max_evals, result.evaluations);
    if (value < best_value) {
      best_value = value;
      best_theta = theta;
    }
  }
  result.warning = !(best_value < init_value);
  result.params = to_params(best_theta);
  result.log_posterior = -best_value;
  return result;
}

}  // namespace lipbo::gp

#endif  // LIPBO_GP_FIT_HPP
