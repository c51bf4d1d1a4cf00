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

// Maximizes a user-defined function with plain Thompson sampling and with the
// accept-reject Lipschitz filter, then prints the envelope at the end of the
// filtered run.

#include <cmath>
#include <cstdio>

#include "lipbo/lipbo.hpp"

namespace {

using namespace lipbo;

// A bumpy 2-D surface with its peak at (0.7, 0.2).
double bumpy(const Point& x) {
  const double dx = x[0] - 0.7, dy = x[1] - 0.2;
  return std::exp(-20.0 * (dx * dx + dy * dy)) + 0.3 * std::sin(9.0 * x[0]) * std::cos(7.0 * x[1]);
}

}  // namespace

int main() {
  bench::BenchmarkFn f;
  f.name = "bumpy";
  f.dim = 2;
  f.box = bench::BoxDomain::unit(2);
  f.fn = bumpy;
  f.ref_optimum = direct::direct_maximize(bumpy, f.box, 20000).value;

  harness::RunConfig cfg;
  cfg.benchmark = f.name;
  cfg.iterations = 40;
  cfg.seeds = {1, 2, 3};
  cfg.acquisition.base = acq::BaseAcquisition::TS;

  std::printf("reference optimum %.6f\n", f.ref_optimum);
  for (auto lbo : {acq::LboMode::None, acq::LboMode::AcceptReject}) {
    cfg.acquisition.lbo = lbo;
    const auto traces = harness::run_experiment(f, cfg);
    std::printf("%-6s", cfg.method_name().c_str());
    for (const auto& t : traces) std::printf("  seed %llu: error %.4g", static_cast<unsigned long long>(t.seed), t.final_abs_error());
    std::printf("\n");
  }

  // Envelope from the last filtered run, sliced along x[1] = 0.2.
  const auto trace = harness::run_seed(f, cfg, 1);
  ObservationHistory h(2);
  for (const auto& r : trace.records) h.add(r.x, r.y);
  const double grown = trace.records.back().L_hat;
  const double sampled = lipschitz::estimate_true_L(bumpy, f.box.lower, f.box.upper, 20000, 0);
  std::printf("\nenvelope along x[1] = 0.2 after %zu evaluations\n", h.size());
  std::printf("growing L %.4g, sampled L %.4g\n", grown, sampled);
  std::printf("%6s %10s %10s %10s %10s\n", "x[0]", "f", "grown up", "sampled lo", "sampled up");
  for (int i = 0; i <= 10; ++i) {
    const Point x = Eigen::Vector2d(i / 10.0, 0.2);
    const auto loose = lipschitz::envelope(h, grown, x);
    const auto tight = lipschitz::envelope(h, sampled, x);
    std::printf("%6.2f %10.4f %10.4f %10.4f %10.4f\n", x[0], bumpy(x), loose.upper, tight.lower, tight.upper);
  }
  return 0;
}
