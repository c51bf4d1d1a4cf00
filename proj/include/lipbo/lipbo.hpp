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

#ifndef LIPBO_LIPBO_HPP
#define LIPBO_LIPBO_HPP

#include "lipbo/core/types.hpp"
#include "lipbo/gp/kernel.hpp"
#include "lipbo/gp/posterior.hpp"
#include "lipbo/gp/fit.hpp"
#include "lipbo/lipschitz/lipschitz.hpp"
#include "lipbo/acquisition/acquisition.hpp"
#include "lipbo/direct/direct.hpp"
#include "lipbo/benchmarks/benchmarks.hpp"
#include "lipbo/harness/config.hpp"
#include "lipbo/harness/standardize.hpp"
#include "lipbo/harness/experiment.hpp"
#include "lipbo/harness/aggregate.hpp"
#include "lipbo/harness/plot.hpp"
#include "lipbo/harness/io.hpp"
#include "lipbo/theory/regret.hpp"
#include "lipbo/theory/harmless.hpp"

#endif  // LIPBO_LIPBO_HPP
