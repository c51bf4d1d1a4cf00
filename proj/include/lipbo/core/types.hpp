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

#ifndef LIPBO_CORE_TYPES_HPP
#define LIPBO_CORE_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace lipbo {

/// A location in the search domain. Length equals the problem dimension.
using Point = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error hierarchy. Everything thrown by the library derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct FactorizationError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

inline bool all_finite(const Point& p) { return p.allFinite(); }

inline void require_dim(const Point& p, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(p.size()) != dim) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(dim) + ", got " +
                         std::to_string(p.size()));
  }
}

/**
 * The evaluated points and their values, in evaluation order.
 *
 * Observations are noiseless, so a repeated point must come with the value
 * it was first observed with. That is enforced on insertion.
 */
class ObservationHistory {
 public:
  ObservationHistory() = default;
  explicit ObservationHistory(std::size_t dim) : dim_(dim) {}

  ObservationHistory(std::vector<Point> points, std::vector<double> values) {
    if (points.size() != values.size()) throw Error("ObservationHistory: points/values length mismatch");
    for (std::size_t i = 0; i < points.size(); ++i) add(std::move(points[i]), values[i]);
  }

  /**
   * Builds a history from evaluations of a deterministic function without the
   * O(n^2) duplicate scan; repeated points already carry equal values.
   */
  static ObservationHistory from_samples(std::vector<Point> points, std::vector<double> values) {
    if (points.size() != values.size()) throw Error("ObservationHistory: points/values length mismatch");
    ObservationHistory out(points.empty() ? 0 : static_cast<std::size_t>(points.front().size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!std::isfinite(values[i])) throw DomainError("ObservationHistory: non-finite value");
      if (!all_finite(points[i])) throw DomainError("ObservationHistory: non-finite coordinate");
      require_dim(points[i], out.dim_, "ObservationHistory::from_samples");
    }
    out.points_ = std::move(points);
    out.values_ = std::move(values);
    return out;
  }

  void add(Point x, double y) {
    if (!std::isfinite(y)) throw DomainError("ObservationHistory: non-finite value");
    if (!all_finite(x)) throw DomainError("ObservationHistory: non-finite coordinate");
    if (points_.empty() && dim_ == 0) dim_ = static_cast<std::size_t>(x.size());
    require_dim(x, dim_, "ObservationHistory::add");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i] == x && values_[i] != y) {
        throw DomainError("ObservationHistory: duplicate point with a different value");
      }
    }
    points_.push_back(std::move(x));
    values_.push_back(y);
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dim() const { return dim_; }

  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double value(std::size_t i) const { return values_[i]; }

  double best_value() const {
    double best = -kInf;
    for (double v : values_) best = std::max(best, v);
    return best;
  }

  std::size_t best_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values_.size(); ++i)
      if (values_[i] > values_[best]) best = i;
    return best;
  }

  /// Same points, values replaced. Used for standardized copies.
  ObservationHistory with_values(std::vector<double> values) const {
    if (values.size() != values_.size()) throw Error("ObservationHistory::with_values: length mismatch");
    ObservationHistory out(dim_);
    out.points_ = points_;
    out.values_ = std::move(values);
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Point> points_;
  std::vector<double> values_;
};

}  // namespace lipbo

#endif  // LIPBO_CORE_TYPES_HPP
