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

#ifndef LIPBO_DIRECT_DIRECT_HPP
#define LIPBO_DIRECT_DIRECT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "lipbo/core/types.hpp"

namespace lipbo::direct {

using Objective = std::function<double(const Point&)>;

/// Axis-aligned box [lower, upper].
struct BoxDomain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  BoxDomain() = default;
  BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi) : lower(std::move(lo)), upper(std::move(hi)) { validate(); }

  static BoxDomain unit(std::size_t dim) {
    return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim))};
  }

  std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
  Eigen::VectorXd width() const { return upper - lower; }

  void validate() const {
    if (lower.size() != upper.size() || lower.size() == 0) throw DimensionError("BoxDomain: bad bounds");
    for (Eigen::Index j = 0; j < lower.size(); ++j) {
      if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || !(lower[j] < upper[j]))
        throw DomainError("BoxDomain: need finite lower < upper in every dimension");
    }
  }

  /// Maps unit-cube coordinates to the box.
  Point from_unit(const Eigen::VectorXd& u) const { return lower + u.cwiseProduct(upper - lower); }
  Eigen::VectorXd to_unit(const Point& x) const { return (x - lower).cwiseQuotient(upper - lower); }

  bool contains(const Point& x, double slack = 0.0) const {
    if (static_cast<std::size_t>(x.size()) != dim()) return false;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double tol = slack * (upper[j] - lower[j]);
      if (!(x[j] >= lower[j] - tol && x[j] <= upper[j] + tol)) return false;
    }
    return true;
  }

  Point sample_uniform(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Point x(lower.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = lower[j] + u01(rng) * (upper[j] - lower[j]);
    return x;
  }
};

/**
 * A hyper-rectangle of the unit cube. Side j has length 3^-levels[j].
 * `value` is the objective at the center (-inf for rejected probes).
 */
struct Rectangle {
  Eigen::VectorXd center;
  std::vector<int> levels;
  double value = -kInf;

  double side(std::size_t j) const { return std::pow(3.0, -levels[j]); }

  Eigen::VectorXd side_lengths() const {
    Eigen::VectorXd s(center.size());
    for (std::size_t j = 0; j < levels.size(); ++j) s[static_cast<Eigen::Index>(j)] = side(j);
    return s;
  }

  /// Center-to-vertex distance; the DIRECT size measure.
  double size() const {
    std::vector<int> sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    double s2 = 0.0;
    for (int l : sorted) s2 += std::pow(9.0, -l);
    return 0.5 * std::sqrt(s2);
  }

  double volume() const {
    double v = 1.0;
    for (std::size_t j = 0; j < levels.size(); ++j) v *= side(j);
    return v;
  }
};

inline constexpr double kDefaultEpsilon = 1e-4;
inline constexpr std::size_t kDefaultBudget = 2000;

/**
 * Indices of potentially optimal rectangles (maximization): rectangle j
 * qualifies if some K > 0 gives value_j + K size_j >= value_i + K size_i for
 * every i and value_j + K size_j >= f_best + epsilon |f_best|.
 *
 * Among equal-size rectangles only the best (lowest index on ties) can
 * qualify. Rectangles valued -inf are skipped unless every rectangle is
 * -inf, in which case the largest ones are returned.
 */
inline std::vector<std::size_t> potentially_optimal(const std::vector<Rectangle>& rects,
                                                    const std::vector<double>& sizes, double f_best,
                                                    double epsilon = kDefaultEpsilon) {
  if (rects.empty()) throw Error("potentially_optimal: no rectangles");
  if (sizes.size() != rects.size()) throw Error("potentially_optimal: one size per rectangle required");

  struct Group {
    double size;
    std::size_t best;
  };
  std::map<double, std::size_t> best_by_size;
  bool any_finite = false;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    if (rects[i].value == -kInf) continue;
    any_finite = true;
    const double s = sizes[i];
    auto it = best_by_size.find(s);
    if (it == best_by_size.end() || rects[i].value > rects[it->second].value) best_by_size[s] = i;
  }

  if (!any_finite) {
    double largest = 0.0;
    for (double sz : sizes) largest = std::max(largest, sz);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rects.size(); ++i)
      if (sizes[i] == largest) out.push_back(i);
    return out;
  }

  std::vector<Group> groups;
  for (const auto& [s, idx] : best_by_size) groups.push_back({s, idx});

  std::vector<std::size_t> out;
  const double threshold = f_best + epsilon * std::abs(f_best);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double sj = groups[g].size;
    const double vj = rects[groups[g].best].value;
    double k_lo = 0.0;
    double k_hi = kInf;
    for (std::size_t h = 0; h < groups.size(); ++h) {
      if (h == g) continue;
      const double si = groups[h].size;
      const double vi = rects[groups[h].best].value;
      if (si < sj) {
        k_lo = std::max(k_lo, (vi - vj) / (sj - si));
      } else {
        k_hi = std::min(k_hi, (vj - vi) / (si - sj));
      }
    }
    if (k_lo > k_hi || !(k_hi > 0.0)) continue;
    if (std::isfinite(k_hi) && std::isfinite(f_best) && vj + k_hi * sj < threshold) continue;
    out.push_back(groups[g].best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::size_t> potentially_optimal(const std::vector<Rectangle>& rects, double f_best,
                                                    double epsilon = kDefaultEpsilon) {
  std::vector<double> sizes;
  sizes.reserve(rects.size());
  for (const auto& r : rects) sizes.push_back(r.size());
  return potentially_optimal(rects, sizes, f_best, epsilon);
}

/**
 * Trisects `rect` along all of its longest sides. Probes c +- delta e_j are
 * evaluated; dimensions are split in order of their best probe (best first),
 * so the most promising children keep the largest boxes.
 *
 * Returns the shrunken center rectangle followed by the new children.
 */
inline std::vector<Rectangle> trisect(const Rectangle& rect, const std::function<double(const Eigen::VectorXd&)>& unit_objective) {
  const int min_level = *std::min_element(rect.levels.begin(), rect.levels.end());
  std::vector<std::size_t> dims;
  for (std::size_t j = 0; j < rect.levels.size(); ++j)
    if (rect.levels[j] == min_level) dims.push_back(j);
  const double delta = std::pow(3.0, -(min_level + 1));

  struct Probe {
    std::size_t dim;
    Rectangle lo, hi;
    double best;
  };
  std::vector<Probe> probes;
  for (std::size_t j : dims) {
    Probe p{j, rect, rect, -kInf};
    p.lo.center[static_cast<Eigen::Index>(j)] -= delta;
    p.hi.center[static_cast<Eigen::Index>(j)] += delta;
    p.lo.value = unit_objective(p.lo.center);
    p.hi.value = unit_objective(p.hi.center);
    p.best = std::max(p.lo.value, p.hi.value);
    probes.push_back(std::move(p));
  }
  std::stable_sort(probes.begin(), probes.end(), [](const Probe& a, const Probe& b) { return a.best > b.best; });

  Rectangle center = rect;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const std::size_t j = probes[k].dim;
    center.levels[j] += 1;
    // Children split at step k share the center's levels so far.
    probes[k].lo.levels = center.levels;
    probes[k].hi.levels = center.levels;
  }
  std::vector<Rectangle> out;
  out.push_back(std::move(center));
  for (auto& p : probes) {
    out.push_back(std::move(p.lo));
    out.push_back(std::move(p.hi));
  }
  return out;
}

struct DirectResult {
  Point x;
  double value = -kInf;
  std::size_t evaluations = 0;
};

namespace detail {
inline double sanitize(double v) { return std::isfinite(v) || v == kInf ? v : -kInf; }
}  // namespace detail

/**
 * DIRECT maximization of `objective` over `box` using at most `budget`
 * evaluations. The first probe is the box center. Non-finite objective
 * values (NaN, -inf) are recorded as -inf and never abort the search.
 */
inline DirectResult direct_maximize(const Objective& objective, const BoxDomain& box, std::size_t budget = kDefaultBudget,
                                    double epsilon = kDefaultEpsilon) {
  if (budget < 1) throw ConfigError("direct_maximize: budget must be >= 1");
  box.validate();
  const auto d = static_cast<Eigen::Index>(box.dim());
  DirectResult best;
  auto unit_objective = [&](const Eigen::VectorXd& u) {
    const Point x = box.from_unit(u);
    const double v = detail::sanitize(objective(x));
    ++best.evaluations;
    if (v > best.value || best.x.size() == 0) {
      best.value = v;
      best.x = x;
    }
    return v;
  };

  std::vector<Rectangle> rects;
  std::vector<double> sizes;
  Rectangle root{Eigen::VectorXd::Constant(d, 0.5), std::vector<int>(static_cast<std::size_t>(d), 0), -kInf};
  root.value = unit_objective(root.center);
  sizes.push_back(root.size());
  rects.push_back(std::move(root));

  while (best.evaluations < budget) {
    const auto selected = potentially_optimal(rects, sizes, best.value, epsilon);
    bool progressed = false;
    for (std::size_t idx : selected) {
      const int min_level = *std::min_element(rects[idx].levels.begin(), rects[idx].levels.end());
      std::size_t cost = 0;
      for (int l : rects[idx].levels) cost += (l == min_level) ? 2 : 0;
      if (best.evaluations + cost > budget) continue;
      auto parts = trisect(rects[idx], unit_objective);
      sizes[idx] = parts.front().size();
      rects[idx] = std::move(parts.front());
      for (std::size_t k = 1; k < parts.size(); ++k) {
        sizes.push_back(parts[k].size());
        rects.push_back(std::move(parts[k]));
      }
      progressed = true;
    }
    if (!progressed) break;
  }
  return best;
}

/// Best of n uniform draws from `box`.
inline DirectResult random_candidate_maximize(const Objective& objective, const BoxDomain& box, std::size_t n,
                                              std::mt19937_64& rng) {
  if (n < 1) throw ConfigError("random_candidate_maximize: n must be >= 1");
  DirectResult best;
  for (std::size_t i = 0; i < n; ++i) {
    Point x = box.sample_uniform(rng);
    const double v = detail::sanitize(objective(x));
    ++best.evaluations;
    if (best.x.size() == 0 || v > best.value) {
      best.value = v;
      best.x = std::move(x);
    }
  }
  return best;
}

inline DirectResult random_candidate_maximize(const Objective& objective, const BoxDomain& box, std::size_t n,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_candidate_maximize(objective, box, n, rng);
}

}  // namespace lipbo::direct

#endif  // LIPBO_DIRECT_DIRECT_HPP
