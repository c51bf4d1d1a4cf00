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

#ifndef LIPBO_GP_KERNEL_HPP
#define LIPBO_GP_KERNEL_HPP

#include <cmath>

#include <Eigen/Core>

#include "lipbo/core/types.hpp"

namespace lipbo::gp {

enum class KernelKind {
  Matern52,
  // Only used by the finite-decision-space regret checks.
  SquaredExponential,
};

/// Default observation noise standard deviation; its square (1e-6) acts as jitter.
inline constexpr double kDefaultNoiseSd = 1e-3;

struct KernelParams {
  Eigen::VectorXd length_scales;  // one per dimension, > 0
  double signal_scale = 1.0;      // sigma0 > 0
  double noise_sd = kDefaultNoiseSd;
  KernelKind kind = KernelKind::Matern52;

  std::size_t dim() const { return static_cast<std::size_t>(length_scales.size()); }

  static KernelParams isotropic(std::size_t dim, double length_scale, double signal_scale = 1.0,
                                double noise_sd = kDefaultNoiseSd) {
    KernelParams p;
    p.length_scales = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), length_scale);
    p.signal_scale = signal_scale;
    p.noise_sd = noise_sd;
    return p;
  }

  void validate() const {
    if (length_scales.size() == 0) throw ConfigError("KernelParams: no length scales");
    for (Eigen::Index j = 0; j < length_scales.size(); ++j) {
      if (!(length_scales[j] > 0.0) || !std::isfinite(length_scales[j]))
        throw ConfigError("KernelParams: length scales must be positive and finite");
    }
    if (!(signal_scale > 0.0) || !std::isfinite(signal_scale))
      throw ConfigError("KernelParams: signal scale must be positive");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw ConfigError("KernelParams: noise sd must be >= 0");
  }

  double prior_variance() const { return signal_scale * signal_scale; }
  double noise_variance() const { return noise_sd * noise_sd; }
};

namespace detail {

/// Kernel value from the scaled squared distance r^2 = sum_j (a_j - b_j)^2 / l_j^2.
inline double kernel_from_r2(KernelKind kind, double signal_variance, double r2) {
  if (kind == KernelKind::SquaredExponential) return signal_variance * std::exp(-0.5 * r2);
  const double r = std::sqrt(r2);
  const double s5r = std::sqrt(5.0) * r;
  return signal_variance * std::exp(-s5r) * (1.0 + s5r + 5.0 * r2 / 3.0);
}

inline double scaled_r2(const Eigen::VectorXd& inv_ls2, const Point& a, const Point& b) {
  double r2 = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    r2 += d * d * inv_ls2[j];
  }
  return r2;
}

inline Eigen::VectorXd inverse_squared(const Eigen::VectorXd& ls) { return ls.array().square().inverse().matrix(); }

}  // namespace detail

/// Evaluates k(a, b). Matern-5/2 uses r = sqrt(sum_j (a_j - b_j)^2 / l_j^2).
inline double kernel_eval(const KernelParams& params, const Point& a, const Point& b) {
  require_dim(a, params.dim(), "kernel_eval");
  require_dim(b, params.dim(), "kernel_eval");
  if (!all_finite(a) || !all_finite(b)) throw DomainError("kernel_eval: non-finite coordinates");
  const Eigen::VectorXd inv = detail::inverse_squared(params.length_scales);
  return detail::kernel_from_r2(params.kind, params.prior_variance(), detail::scaled_r2(inv, a, b));
}

/// Gram matrix K_ij = k(x_i, x_j), without the noise term.
inline Eigen::MatrixXd kernel_matrix(const KernelParams& params, const std::vector<Point>& xs) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const Eigen::VectorXd inv = detail::inverse_squared(params.length_scales);
  const double s2 = params.prior_variance();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = s2;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = detail::kernel_from_r2(params.kind, s2, detail::scaled_r2(inv, xs[i], xs[j]));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

}  // namespace lipbo::gp

#endif  // LIPBO_GP_KERNEL_HPP
