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
#include <limits>

#include <gtest/gtest.h>

#include "lipbo/core/types.hpp"

namespace lipbo {
namespace {

Point P1(double x) { return Point::Constant(1, x); }

TEST(ObservationHistory, StartsEmptyAndAdoptsDimension) {
  ObservationHistory h;
  EXPECT_TRUE(h.empty());
  h.add(Eigen::Vector2d(0.0, 1.0), 3.0);
  EXPECT_EQ(h.dim(), 2u);
  EXPECT_EQ(h.size(), 1u);
  EXPECT_THROW(h.add(P1(0.0), 1.0), DimensionError);
}

TEST(ObservationHistory, RejectsNonFinite) {
  ObservationHistory h(1);
  EXPECT_THROW(h.add(P1(0.0), std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(h.add(P1(kInf), 1.0), DomainError);
}

TEST(ObservationHistory, DuplicatesMustAgree) {
  ObservationHistory h(1);
  h.add(P1(0.5), 1.0);
  EXPECT_NO_THROW(h.add(P1(0.5), 1.0));
  EXPECT_THROW(h.add(P1(0.5), 2.0), DomainError);
  EXPECT_EQ(h.size(), 2u);
}

TEST(ObservationHistory, BestValueAndIndex) {
  ObservationHistory h({P1(0.0), P1(1.0), P1(2.0)}, {1.0, 5.0, 5.0});
  EXPECT_DOUBLE_EQ(h.best_value(), 5.0);
  EXPECT_EQ(h.best_index(), 1u);
}

TEST(ObservationHistory, WithValuesKeepsPoints) {
  ObservationHistory h({P1(0.0), P1(1.0)}, {1.0, 2.0});
  const auto g = h.with_values({-1.0, 1.0});
  EXPECT_EQ(g.point(1)[0], 1.0);
  EXPECT_EQ(g.value(0), -1.0);
  EXPECT_THROW(h.with_values({1.0}), Error);
}

TEST(ObservationHistory, LengthMismatchThrows) {
  EXPECT_THROW(ObservationHistory({P1(0.0)}, {}), Error);
  EXPECT_THROW(ObservationHistory::from_samples({P1(0.0)}, {}), Error);
}

}  // namespace
}  // namespace lipbo
