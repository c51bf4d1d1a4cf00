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

#ifndef LIPBO_LIPSCHITZ_LIPSCHITZ_HPP
#define LIPBO_LIPSCHITZ_LIPSCHITZ_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "lipbo/core/types.hpp"

namespace lipbo::lipschitz {

/// Pairs closer than this are treated as the same point when estimating slopes.
inline constexpr double kCoincidentDistance = 1e-12;

/// Default multiplier for the growing estimate kappa * t * L_lb.
inline constexpr double kDefaultKappa = 10.0;

struct EnvelopeValues {
  double lower = -kInf;
  double upper = kInf;

  /// False when the history contradicts the supplied constant (L too small).
  bool consistent() const { return lower <= upper; }
};

/// Lower and upper Lipschitz envelopes at x. O(t * d).
inline EnvelopeValues envelope(const ObservationHistory& history, double L, const Point& x) {
  if (history.empty()) throw Error("envelope: empty history");
  if (!(L >= 0.0)) throw DomainError("envelope: L must be >= 0");
  require_dim(x, history.dim(), "envelope");
  EnvelopeValues env{-kInf, kInf};
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double r = L * (x - history.point(i)).norm();
    const double y = history.value(i);
    env.lower = std::max(env.lower, y - r);
    env.upper = std::min(env.upper, y + r);
  }
  return env;
}

/// True when x cannot beat the incumbent: f^u(x) <= y*.
inline bool is_pruned(const EnvelopeValues& env, double y_star) { return env.upper <= y_star; }

struct LowerBoundEstimate {
  double value = 0.0;
  bool degenerate = true;          // no pair of distinct points seen
  std::size_t coincident_pairs = 0;  // pairs skipped for being closer than kCoincidentDistance
};

/**
 * Largest observed slope |y_i - y_j| / ||x_i - x_j|| over distinct pairs,
 * maintained online: each new point is compared with all earlier ones.
 */
class SlopeLowerBound {
 public:
  void add(const Point& x, double y) {
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      const double dist = (x - xs_[i]).norm();
      if (dist < kCoincidentDistance) {
        ++est_.coincident_pairs;
        continue;
      }
      est_.value = std::max(est_.value, std::abs(y - ys_[i]) / dist);
      est_.degenerate = false;
    }
    xs_.push_back(x);
    ys_.push_back(y);
  }

  const LowerBoundEstimate& estimate() const { return est_; }
  double value() const { return est_.value; }
  std::size_t size() const { return xs_.size(); }

 private:
  std::vector<Point> xs_;
  std::vector<double> ys_;
  LowerBoundEstimate est_;
};

namespace detail {

inline constexpr double kMinDist2 = kCoincidentDistance * kCoincidentDistance;

/// Exhaustive O(n^2) scan: best squared slope, counting coincident pairs.
inline double slope_scan_all(const ObservationHistory& history, std::size_t& coincident) {
  const auto n = static_cast<Eigen::Index>(history.size());
  const auto d = static_cast<Eigen::Index>(history.dim());
  // Coordinate-major copy so each row scan streams contiguous memory.
  Eigen::ArrayXXd coords(n, d);
  for (Eigen::Index i = 0; i < n; ++i) coords.row(i) = history.point(static_cast<std::size_t>(i)).transpose().array();
  const Eigen::Map<const Eigen::ArrayXd> ys(history.values().data(), n);

  double best2 = 0.0;
  Eigen::ArrayXd r2(n);
  for (Eigen::Index i = 1; i < n; ++i) {
    auto dist2 = r2.head(i);
    dist2 = (coords.col(0).head(i) - coords(i, 0)).square();
    for (Eigen::Index j = 1; j < d; ++j) dist2 += (coords.col(j).head(i) - coords(i, j)).square();
    const auto dy2 = (ys.head(i) - ys[i]).square();
    const auto far = dist2 >= kMinDist2;
    coincident += static_cast<std::size_t>(i - far.count());
    // Division-free screen: only rows holding a pair steeper than the current
    // best need the exact ratios.
    if (!(far.select(dy2 - best2 * dist2, -1.0).maxCoeff() > 0.0)) continue;
    best2 = std::max(best2, far.select(dy2 / dist2, 0.0).maxCoeff());
  }
  return best2;
}

/**
 * Same result as slope_scan_all for low dimensions, but buckets the points
 * into a grid and skips every pair of cells whose slope bound
 * (value spread) / (cell gap) cannot beat the best slope found so far.
 */
inline double slope_scan_bucketed(const ObservationHistory& history, std::size_t& coincident) {
  constexpr double kPointsPerCell = 32.0;
  const std::size_t n = history.size();
  const auto d = static_cast<Eigen::Index>(history.dim());
  Eigen::VectorXd lo = history.point(0), hi = history.point(0);
  for (const auto& x : history.points()) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  const auto per_axis = static_cast<long>(std::max(
      1.0, std::floor(std::pow(static_cast<double>(n) / kPointsPerCell, 1.0 / static_cast<double>(d)))));
  Eigen::VectorXd width = (hi - lo) / static_cast<double>(per_axis);

  struct Cell {
    std::vector<std::size_t> members;
    std::vector<long> index;
    double ymin = kInf;
    double ymax = -kInf;
  };
  std::vector<Cell> cells;
  std::vector<long> flat_to_cell;
  long total = 1;
  for (Eigen::Index j = 0; j < d; ++j) total *= per_axis;
  flat_to_cell.assign(static_cast<std::size_t>(total), -1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& x = history.point(i);
    long flat = 0;
    std::vector<long> idx(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
      long c = width[j] > 0.0 ? static_cast<long>((x[j] - lo[j]) / width[j]) : 0;
      c = std::clamp(c, 0L, per_axis - 1);
      idx[static_cast<std::size_t>(j)] = c;
      flat = flat * per_axis + c;
    }
    long& slot = flat_to_cell[static_cast<std::size_t>(flat)];
    if (slot < 0) {
      slot = static_cast<long>(cells.size());
      cells.push_back({{}, idx, kInf, -kInf});
    }
    Cell& cell = cells[static_cast<std::size_t>(slot)];
    cell.members.push_back(i);
    cell.ymin = std::min(cell.ymin, history.value(i));
    cell.ymax = std::max(cell.ymax, history.value(i));
  }

  double best2 = 0.0;
  auto scan_pair = [&](const Cell& a, const Cell& b, bool same) {
    for (std::size_t p = 0; p < a.members.size(); ++p) {
      const std::size_t i = a.members[p];
      const Point& xi = history.point(i);
      const double yi = history.value(i);
      for (std::size_t q = same ? p + 1 : 0; q < b.members.size(); ++q) {
        const std::size_t k = b.members[q];
        const double r2 = (history.point(k) - xi).squaredNorm();
        if (r2 < kMinDist2) {
          ++coincident;
          continue;
        }
        const double dy = history.value(k) - yi;
        best2 = std::max(best2, dy * dy / r2);
      }
    }
  };
  // Smallest squared distance between points of two cells; 0 for touching cells.
  auto gap2 = [&](const Cell& a, const Cell& b) {
    double g = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const long steps = std::abs(a.index[static_cast<std::size_t>(j)] - b.index[static_cast<std::size_t>(j)]) - 1;
      if (steps > 0) {
        const double w = static_cast<double>(steps) * width[j];
        g += w * w;
      }
    }
    return g;
  };

  // Touching cells first so that the bound starts out tight.
  for (std::size_t a = 0; a < cells.size(); ++a) {
    scan_pair(cells[a], cells[a], true);
    for (std::size_t b = a + 1; b < cells.size(); ++b)
      if (gap2(cells[a], cells[b]) < kMinDist2) scan_pair(cells[a], cells[b], false);
  }
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      const Cell& ca = cells[a];
      const Cell& cb = cells[b];
      const double g2 = gap2(ca, cb);
      if (g2 < kMinDist2) continue;
      const double spread = std::max(ca.ymax - cb.ymin, cb.ymax - ca.ymin);
      if (spread * spread > best2 * g2) scan_pair(ca, cb, false);
    }
  }
  return best2;
}

}  // namespace detail

/// Batch O(t^2) slope lower bound over a history (grid-pruned for large low-dimensional histories).
inline LowerBoundEstimate estimate_L_lb(const ObservationHistory& history) {
  LowerBoundEstimate est;
  const std::size_t n = history.size();
  if (n < 2) return est;
  const double best2 = n >= 4096 && history.dim() <= 3 ? detail::slope_scan_bucketed(history, est.coincident_pairs)
                                                       : detail::slope_scan_all(history, est.coincident_pairs);
  est.degenerate = est.coincident_pairs == n * (n - 1) / 2;
  est.value = std::sqrt(best2);
  return est;
}

/// kappa * t * L_lb.
inline double growing_L(std::size_t t, double L_lb, double kappa = kDefaultKappa) {
  if (t < 1) throw DomainError("growing_L: t must be >= 1");
  if (!(kappa > 0.0)) throw DomainError("growing_L: kappa must be > 0");
  if (!(L_lb >= 0.0)) throw DomainError("growing_L: L_lb must be >= 0");
  return kappa * static_cast<double>(t) * L_lb;
}

struct KnownL {
  double value;
};
struct GrowingL {
  double kappa = kDefaultKappa;
};
struct OfflineTrueL {
  double value;
};
using LipschitzMode = std::variant<KnownL, GrowingL, OfflineTrueL>;

/// The L estimate in use at iteration t.
class LipschitzState {
 public:
  explicit LipschitzState(LipschitzMode mode) : mode_(mode) {
    if (const auto* k = std::get_if<KnownL>(&mode_)) current_ = k->value;
    if (const auto* o = std::get_if<OfflineTrueL>(&mode_)) current_ = o->value;
    if (!(current_ >= 0.0)) throw DomainError("LipschitzState: L must be >= 0");
  }

  /// Advances to iteration t with slope lower bound L_lb. Fixed modes ignore L_lb.
  double update(std::size_t t, double L_lb) {
    iteration_ = t;
    if (const auto* g = std::get_if<GrowingL>(&mode_)) current_ = growing_L(t, L_lb, g->kappa);
    return current_;
  }

  const LipschitzMode& mode() const { return mode_; }
  double current_value() const { return current_; }
  std::size_t iteration() const { return iteration_; }

 private:
  LipschitzMode mode_;
  double current_ = 0.0;
  std::size_t iteration_ = 0;
};

using Objective = std::function<double(const Point&)>;

/// Offline "true" L: the slope lower bound over n uniform samples of f in [lower, upper].
inline double estimate_true_L(const Objective& f, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                              std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DomainError("estimate_true_L: n must be >= 2");
  if (lower.size() != upper.size()) throw DimensionError("estimate_true_L: bound dimensions differ");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Point> pts;
  std::vector<double> vals;
  pts.reserve(n);
  vals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point x(lower.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = lower[j] + u01(rng) * (upper[j] - lower[j]);
    vals.push_back(f(x));
    pts.push_back(std::move(x));
  }
  return estimate_L_lb(ObservationHistory::from_samples(std::move(pts), std::move(vals))).value;
}

}  // namespace lipbo::lipschitz

#endif  // LIPBO_LIPSCHITZ_LIPSCHITZ_HPP
