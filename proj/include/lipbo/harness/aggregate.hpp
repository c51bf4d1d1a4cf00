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

#ifndef LIPBO_HARNESS_AGGREGATE_HPP
#define LIPBO_HARNESS_AGGREGATE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lipbo/core/types.hpp"
#include "lipbo/harness/experiment.hpp"

namespace lipbo::harness {

/// Linearly interpolated sample quantile (the R type-7 rule).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("quantile: no values");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile: q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct SummaryRow {
  std::size_t iteration = 0;
  std::string method;
  double mean_abs_error = 0.0;
  double std_abs_error = 0.0;  // population
  double q10 = 0.0;
  double q90 = 0.0;
};

/**
 * Per-method, per-iteration statistics of the absolute error across seeds.
 * Failed traces are skipped; methods appear in first-seen order.
 */
inline std::vector<SummaryRow> aggregate(const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw Error("aggregate: no traces");
  std::vector<std::string> methods;
  for (const auto& tr : traces)
    if (std::find(methods.begin(), methods.end(), tr.method) == methods.end()) methods.push_back(tr.method);

  std::vector<SummaryRow> rows;
  for (const auto& method : methods) {
    std::vector<const RunTrace*> group;
    for (const auto& tr : traces)
      if (tr.method == method && !tr.failed) group.push_back(&tr);
    if (group.empty()) continue;
    std::size_t length = group.front()->records.size();
    for (const auto* tr : group) length = std::min(length, tr->records.size());
    std::vector<double> errs(group.size());
    for (std::size_t i = 0; i < length; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < group.size(); ++k) sum += errs[k] = group[k]->records[i].abs_error;
      const double mean = sum / static_cast<double>(group.size());
      double ss = 0.0;
      for (double e : errs) ss += (e - mean) * (e - mean);
      rows.push_back({group.front()->records[i].t, method, mean, std::sqrt(ss / static_cast<double>(group.size())),
                      quantile(errs, 0.1), quantile(errs, 0.9)});
    }
  }
  if (rows.empty()) throw Error("aggregate: every trace failed");
  return rows;
}

/// Mean final absolute error over the non-failed traces of `method`.
inline double mean_final_error(const std::vector<RunTrace>& traces, const std::string& method = "") {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& tr : traces) {
    if (tr.failed || tr.records.empty() || (!method.empty() && tr.method != method)) continue;
    sum += tr.final_abs_error();
    ++n;
  }
  if (n == 0) throw Error("mean_final_error: no completed traces");
  return sum / static_cast<double>(n);
}

}  // namespace lipbo::harness

#endif  // LIPBO_HARNESS_AGGREGATE_HPP
