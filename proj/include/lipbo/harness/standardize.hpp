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

#ifndef LIPBO_HARNESS_STANDARDIZE_HPP
#define LIPBO_HARNESS_STANDARDIZE_HPP

#include <cmath>
#include <vector>

#include "lipbo/core/types.hpp"

namespace lipbo::harness {

/// Raw standard deviations below this are replaced by 1.
inline constexpr double kMinStd = 1e-12;

struct StandardizationState {
  double mean = 0.0;
  double std = 1.0;  // population convention

  double apply(double v) const { return (v - mean) / std; }
  double invert(double z) const { return z * std + mean; }
  /// A Lipschitz constant in raw units expressed in standardized units.
  double scale_lipschitz(double L) const { return L / std; }
};

struct Standardized {
  StandardizationState state;
  std::vector<double> values;
};

inline Standardized standardize(const std::vector<double>& values) {
  if (values.empty()) throw Error("standardize: no values");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double sd = std::sqrt(ss / n);
  if (!(sd >= kMinStd)) sd = 1.0;
  Standardized out{{mean, sd}, {}};
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back(out.state.apply(v));
  return out;
}

inline std::vector<double> unstandardize(const StandardizationState& state, const std::vector<double>& z) {
  std::vector<double> out;
  out.reserve(z.size());
  for (double v : z) out.push_back(state.invert(v));
  return out;
}

}  // namespace lipbo::harness

#endif  // LIPBO_HARNESS_STANDARDIZE_HPP
