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

#ifndef LIPBO_BENCHMARKS_BENCHMARKS_HPP
#define LIPBO_BENCHMARKS_BENCHMARKS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lipbo/core/types.hpp"
#include "lipbo/direct/direct.hpp"

namespace lipbo::bench {

using direct::BoxDomain;

/**
 * A synthetic test function in maximization form (classical minimization
 * problems are negated). `ref_optimum` is the best achievable value.
 */
struct BenchmarkFn {
  std::string name;
  std::size_t dim = 0;
  BoxDomain box;
  std::function<double(const Point&)> fn;
  double ref_optimum = 0.0;
  bool log_scale_error = false;
};

/// Relative slack on box containment, to absorb round-off from unit-cube maps.
inline constexpr double kBoxSlack = 1e-12;

inline double evaluate(const BenchmarkFn& f, const Point& x) {
  require_dim(x, f.dim, "evaluate");
  if (!f.box.contains(x, kBoxSlack)) throw DomainError("evaluate: point outside the domain of " + f.name);
  return f.fn(x);
}

namespace forms {

using std::numbers::pi;

// Branin-Hoo on [-5, 10] x [0, 15]; minimum 5 / (4 pi).
inline double branin(const Point& x) {
  const double b = 5.1 / (4.0 * pi * pi);
  const double c = 5.0 / pi;
  const double t = 1.0 / (8.0 * pi);
  const double u = x[1] - b * x[0] * x[0] + c * x[0] - 6.0;
  return u * u + 10.0 * (1.0 - t) * std::cos(x[0]) + 10.0;
}

// Six-hump camel back on [-3, 3] x [-2, 2].
inline double camel(const Point& x) {
  const double x1 = x[0], x2 = x[1];
  const double x1s = x1 * x1, x2s = x2 * x2;
  return (4.0 - 2.1 * x1s + x1s * x1s / 3.0) * x1s + x1 * x2 + (-4.0 + 4.0 * x2s) * x2s;
}

// Goldstein-Price on [-2, 2]^2; minimum 3 at (0, -1).
inline double goldstein_price(const Point& x) {
  const double x1 = x[0], x2 = x[1];
  const double a = 1.0 + (x1 + x2 + 1.0) * (x1 + x2 + 1.0) *
                             (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2);
  const double b = 30.0 + (2.0 * x1 - 3.0 * x2) * (2.0 * x1 - 3.0 * x2) *
                              (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2);
  return a * b;
}

// Michalewicz with steepness m = 10 on [0, pi]^d.
inline double michalewicz(const Point& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = std::sin(static_cast<double>(i + 1) * x[i] * x[i] / pi);
    s += std::sin(x[i]) * std::pow(v, 20);
  }
  return -s;
}

inline constexpr std::array<double, 4> kHartmannAlpha = {1.0, 1.2, 3.0, 3.2};

// Hartmann 3-D on [0, 1]^3.
inline double hartmann3(const Point& x) {
  static constexpr double a[4][3] = {{3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}};
  static constexpr double p[4][3] = {
      {0.3689, 0.1170, 0.2673}, {0.4699, 0.4387, 0.7470}, {0.1091, 0.8732, 0.5547}, {0.0381, 0.5743, 0.8828}};
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 3; ++j) inner += a[i][j] * (x[j] - p[i][j]) * (x[j] - p[i][j]);
    s += kHartmannAlpha[static_cast<std::size_t>(i)] * std::exp(-inner);
  }
  return -s;
}

// Hartmann 6-D on [0, 1]^6.
inline double hartmann6(const Point& x) {
  static constexpr double a[4][6] = {{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
                                     {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
                                     {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
                                     {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}};
  static constexpr double p[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                     {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                     {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                                     {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 6; ++j) inner += a[i][j] * (x[j] - p[i][j]) * (x[j] - p[i][j]);
    s += kHartmannAlpha[static_cast<std::size_t>(i)] * std::exp(-inner);
  }
  return -s;
}

// Rosenbrock on [-2.048, 2.048]^d; minimum 0 at (1, ..., 1).
inline double rosenbrock(const Point& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

}  // namespace forms

namespace detail {

inline BoxDomain cube(std::size_t d, double lo, double hi) {
  return {Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), lo), Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d), hi)};
}

inline BenchmarkFn negated(std::string name, BoxDomain box, double (*form)(const Point&), double ref_optimum, bool log_scale) {
  BenchmarkFn b;
  b.name = std::move(name);
  b.dim = box.dim();
  b.box = std::move(box);
  b.fn = [form](const Point& x) { return -form(x); };
  b.ref_optimum = ref_optimum;
  b.log_scale_error = log_scale;
  return b;
}

}  // namespace detail

// Reference optima were established by grid search plus local refinement
// (Michalewicz: exact per-coordinate 1-D maximization, the function being
// separable) and are re-checked by the audit tests.
inline std::vector<BenchmarkFn> registry() {
  using detail::cube;
  using detail::negated;
  constexpr double pi = std::numbers::pi;
  std::vector<BenchmarkFn> r;
  r.push_back(negated("branin-2", BoxDomain(Eigen::Vector2d(-5.0, 0.0), Eigen::Vector2d(10.0, 15.0)), forms::branin,
                      -5.0 / (4.0 * pi), false));
  r.push_back(negated("camel-2", BoxDomain(Eigen::Vector2d(-3.0, -2.0), Eigen::Vector2d(3.0, 2.0)), forms::camel,
                      1.0316284534898774, false));
  r.push_back(negated("goldstein-2", cube(2, -2.0, 2.0), forms::goldstein_price, -3.0, true));
  r.push_back(negated("michalewicz-2", cube(2, 0.0, pi), forms::michalewicz, 1.8013034100985528, false));
  r.push_back(negated("michalewicz-5", cube(5, 0.0, pi), forms::michalewicz, 4.687658179088149, false));
  r.push_back(negated("michalewicz-10", cube(10, 0.0, pi), forms::michalewicz, 9.660151715641344, false));
  r.push_back(negated("hartmann-3", cube(3, 0.0, 1.0), forms::hartmann3, 3.862779787332663, false));
  r.push_back(negated("hartmann-6", cube(6, 0.0, 1.0), forms::hartmann6, 3.3223680114155147, false));
  for (std::size_t d = 2; d <= 5; ++d)
    r.push_back(negated("rosenbrock-" + std::to_string(d), cube(d, -2.048, 2.048), forms::rosenbrock, 0.0, true));
  return r;
}

inline std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto& b : registry()) names.push_back(b.name);
  return names;
}

inline BenchmarkFn lookup(const std::string& name) {
  for (auto& b : registry())
    if (b.name == name) return b;
  std::string known;
  for (const auto& n : registry_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown benchmark '" + name + "'; known: " + known);
}

struct AuditReport {
  std::string name;
  std::size_t samples = 0;
  double max_found = -kInf;
  Point argmax;
  double gap = kInf;  // ref_optimum - max_found
  bool pass = false;
};

/// Audit tolerance: no sample may exceed ref_optimum by more than this.
inline constexpr double kAuditTolerance = 1e-9;

/**
 * Scans a full grid (about n/2 points) plus n/2 uniform samples and checks
 * that nothing beats `ref_optimum`. A failing report carries the violating
 * point in `argmax`.
 */
inline AuditReport reference_optima_audit(const BenchmarkFn& f, std::size_t n, std::uint64_t seed) {
  AuditReport rep;
  rep.name = f.name;
  auto consider = [&](const Point& x) {
    const double v = f.fn(x);
    ++rep.samples;
    if (v > rep.max_found) {
      rep.max_found = v;
      rep.argmax = x;
    }
  };
  const std::size_t grid_budget = n / 2;
  auto per_axis = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(grid_budget), 1.0 / static_cast<double>(f.dim))));
  if (per_axis >= 2) {
    std::vector<std::size_t> idx(f.dim, 0);
    Point x(static_cast<Eigen::Index>(f.dim));
    while (true) {
      for (std::size_t j = 0; j < f.dim; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        x[jj] = f.box.lower[jj] + (f.box.upper[jj] - f.box.lower[jj]) * static_cast<double>(idx[j]) / static_cast<double>(per_axis - 1);
      }
      consider(x);
      std::size_t j = 0;
      while (j < f.dim && ++idx[j] == per_axis) idx[j++] = 0;
      if (j == f.dim) break;
    }
  }
  std::mt19937_64 rng(seed);
  while (rep.samples < n) consider(f.box.sample_uniform(rng));
  rep.gap = f.ref_optimum - rep.max_found;
  rep.pass = rep.max_found <= f.ref_optimum + kAuditTolerance;
  return rep;
}

}  // namespace lipbo::bench

#endif  // LIPBO_BENCHMARKS_BENCHMARKS_HPP
