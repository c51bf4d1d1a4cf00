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

// lipbo: command-line front end for the experiment harness and the
// desk-scale theory checks.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lipbo/lipbo.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lipbo;

constexpr int kExitConfig = 2;
constexpr int kExitFailedSeeds = 3;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string num(double v) { return harness::detail::csv_number(v); }

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string config;
  std::string benchmark;
  std::string acq;
  std::string lbo;
  std::string l_mode;
  std::string kappa;
  std::string iters;
  std::string seeds;
  std::string init_points;
  std::string explore_every;
  std::string direct_budget;
  std::string ts_candidates;
  std::string fit_starts;
  std::string noise_sd;
  std::string beta;
  std::string true_l_samples;
  std::string log_scale;
  std::string out;
  std::size_t jobs = 1;
  bool wall_time = false;
};

struct MethodGroup {
  std::string benchmark;
  std::vector<harness::RunConfig> configs;
};

/// Config file first, then every flag that was given on the command line.
std::vector<MethodGroup> plan_runs(const RunArgs& a, const CLI::App& cmd) {
  harness::RunConfig base;
  if (!a.config.empty()) base = harness::load_config(a.config);
  auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
  // kappa before l_mode so that "growing" picks it up.
  const std::vector<std::pair<const char*, const std::string*>> scalar = {
      {"--kappa", &a.kappa},
      {"--l-mode", &a.l_mode},
      {"--iters", &a.iters},
      {"--seeds", &a.seeds},
      {"--init-points", &a.init_points},
      {"--explore-every", &a.explore_every},
      {"--direct-budget", &a.direct_budget},
      {"--ts-candidates", &a.ts_candidates},
      {"--fit-starts", &a.fit_starts},
      {"--noise-sd", &a.noise_sd},
      {"--beta", &a.beta},
      {"--true-l-samples", &a.true_l_samples},
      {"--log-scale", &a.log_scale},
      {"--out", &a.out},
  };
  for (const auto& [flag, value] : scalar)
    if (given(flag)) harness::apply_setting(base, std::string(flag).substr(2), *value);
  base.record_wall_time = a.wall_time;

  const auto benchmarks = split_list(given("--benchmark") ? a.benchmark : base.benchmark);
  std::vector<acq::BaseAcquisition> bases;
  std::vector<acq::LboMode> lbos;
  if (given("--acq")) {
    for (const auto& s : split_list(a.acq)) bases.push_back(harness::parse_base(s));
  } else {
    bases.push_back(base.acquisition.base);
  }
  if (given("--lbo")) {
    for (const auto& s : split_list(a.lbo)) lbos.push_back(harness::parse_lbo(s));
  } else {
    lbos.push_back(base.acquisition.lbo);
  }
  if (benchmarks.empty() || bases.empty() || lbos.empty()) throw ConfigError("empty benchmark, acq or lbo list");

  std::vector<MethodGroup> groups;
  for (const auto& name : benchmarks) {
    bench::lookup(name);  // unknown names fail before anything runs
    MethodGroup g{name, {}};
    for (auto b : bases) {
      for (auto l : lbos) {
        harness::RunConfig cfg = base;
        cfg.benchmark = name;
        cfg.acquisition.base = b;
        cfg.acquisition.lbo = l;
        if (!cfg.acquisition.valid()) {
          std::cerr << "note: skipping " << cfg.acquisition.name() << " (no such pairing)\n";
          continue;
        }
        cfg.validate();
        g.configs.push_back(cfg);
      }
    }
    if (g.configs.empty()) throw ConfigError("no valid acquisition/LBO pairing requested");
    groups.push_back(std::move(g));
  }
  if (base.out_dir.empty()) throw ConfigError("an output directory is required (--out or out = ... in the config)");
  return groups;
}

int cmd_run(const RunArgs& a, const CLI::App& cmd) {
  const auto groups = plan_runs(a, cmd);
  const fs::path out = groups.front().configs.front().out_dir;
  harness::prepare_output_dir(out);

  std::size_t failed = 0;
  for (const auto& g : groups) {
    const auto f = bench::lookup(g.benchmark);
    std::vector<harness::RunTrace> traces;
    std::printf("%s (optimum %.10g)\n", g.benchmark.c_str(), f.ref_optimum);
    for (const auto& cfg : g.configs) {
      auto batch = harness::run_experiment(f, cfg, a.jobs);
      std::size_t warnings = 0, bad = 0;
      for (const auto& tr : batch) {
        warnings += tr.warnings.size();
        if (tr.failed) {
          ++bad;
          std::cerr << "  seed " << tr.seed << " of " << tr.method << " failed: " << tr.error << "\n";
        }
      }
      failed += bad;
      if (bad < batch.size()) {
        std::printf("  %-22s mean final abs error %-14.6g (%zu seeds, %zu failed, %zu warnings)\n",
                    cfg.method_name().c_str(), harness::mean_final_error(batch), batch.size(), bad, warnings);
      }
      traces.insert(traces.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
    }
    const bool log_scale = g.configs.front().log_scale_error.value_or(f.log_scale_error);
    const auto files =
        harness::emit_outputs(harness::aggregate(traces), traces, g.configs, out, g.benchmark, log_scale, a.wall_time);
    std::printf("  wrote %zu traces, %s, %s\n", files.traces.size(), files.csv.string().c_str(),
                files.svg.string().c_str());
  }
  return failed == 0 ? 0 : kExitFailedSeeds;
}

// ---------------------------------------------------------------- audit

int cmd_audit(std::size_t samples, std::uint64_t seed, std::size_t l_samples) {
  bool ok = true;
  std::printf("%-16s %3s %22s %22s %12s %s\n", "benchmark", "dim", "reference optimum", "best sample", "gap", "");
  for (const auto& f : bench::registry()) {
    const auto rep = bench::reference_optima_audit(f, samples, seed);
    ok = ok && rep.pass;
    std::printf("%-16s %3zu %22.15g %22.15g %12.4g %s", f.name.c_str(), f.dim, f.ref_optimum, rep.max_found, rep.gap,
                rep.pass ? "PASS" : "FAIL");
    if (l_samples >= 2)
      std::printf("  L~%.6g", lipschitz::estimate_true_L(f.fn, f.box.lower, f.box.upper, l_samples, 0));
    std::printf("\n");
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- theory

struct HarmlessArgs {
  std::string benchmark = "branin-2";
  double eps = 0.5;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  double kappa = lipschitz::kDefaultKappa;
  std::optional<double> known_L;
  std::size_t l_samples = 100000;
  std::string out;
};

int cmd_harmless(const HarmlessArgs& a) {
  const auto f = bench::lookup(a.benchmark);
  if (!a.out.empty()) harness::prepare_output_dir(a.out);
  const double L = a.known_L ? *a.known_L : lipschitz::estimate_true_L(f.fn, f.box.lower, f.box.upper, a.l_samples, 0);
  std::printf("%s, eps %g, %zu trials, known L %.6g%s\n", f.name.c_str(), a.eps, a.trials, L,
              a.known_L ? "" : " (sampled)");
  const std::vector<theory::PruneMode> modes = {{theory::PruneKind::NoPrune},
                                                {theory::PruneKind::PruneKnownL, L},
                                                {theory::PruneKind::PruneGrowing, 0.0, a.kappa}};
  std::ostringstream trials_csv, summary_csv;
  trials_csv << "mode,trial,evaluations,rejected,censored\n";
  summary_csv << "mode,mean_evaluations,median_evaluations,mean_rejected,censored,ratio_to_noprune\n";
  std::vector<harness::Series> ecdf;
  double baseline = 0.0;
  for (const auto& mode : modes) {
    const auto s = theory::harmless_pruning_experiment(f, a.eps, mode, a.trials, a.seed);
    if (mode.kind == theory::PruneKind::NoPrune) baseline = s.mean_evaluations;
    const double ratio = s.mean_evaluations / baseline;
    std::printf("  %-13s mean %10.2f  median %8.1f  rejected %10.2f  censored %zu  x%.3f\n", s.mode.c_str(),
                s.mean_evaluations, s.median_evaluations, s.mean_rejected, s.censored, ratio);
    summary_csv << s.mode << ',' << num(s.mean_evaluations) << ',' << num(s.median_evaluations) << ','
                << num(s.mean_rejected) << ',' << s.censored << ',' << num(ratio) << '\n';
    std::vector<double> evals;
    for (std::size_t k = 0; k < s.trials.size(); ++k) {
      const auto& t = s.trials[k];
      trials_csv << s.mode << ',' << k << ',' << t.evaluations << ',' << t.rejected << ',' << (t.censored ? 1 : 0)
                 << '\n';
      evals.push_back(static_cast<double>(t.evaluations));
    }
    std::sort(evals.begin(), evals.end());
    harness::Series series{s.mode, {}, {}};
    for (std::size_t k = 0; k < evals.size(); ++k) {
      series.x.push_back(evals[k]);
      series.y.push_back(static_cast<double>(k + 1) / static_cast<double>(evals.size()));
    }
    ecdf.push_back(std::move(series));
  }
  if (!a.out.empty()) {
    const fs::path dir = a.out;
    const std::string stem = "harmless_" + harness::detail::file_safe(f.name);
    harness::detail::write_text(dir / (stem + "_trials.csv"), trials_csv.str());
    harness::detail::write_text(dir / (stem + "_summary.csv"), summary_csv.str());
    harness::PlotOptions opt;
    opt.title = f.name + ": trials finished vs evaluations (eps " + num(a.eps) + ")";
    opt.x_label = "evaluations";
    opt.y_label = "fraction of trials finished";
    harness::detail::write_text(dir / (stem + ".svg"), harness::render_svg(ecdf, opt));
    std::printf("  wrote %s\n", (dir / (stem + "_summary.csv")).string().c_str());
  }
  return 0;
}

struct RegretArgs {
  theory::RegretConfig cfg;
  std::string seeds = "20";
  std::string beta = "literal";
  std::string out;
};

int cmd_regret(RegretArgs a) {
  if (a.beta == "srinivas") {
    a.cfg.srinivas_beta = true;
  } else if (a.beta != "literal") {
    throw ConfigError("--beta must be literal or srinivas");
  }
  const auto seeds = harness::parse_seeds(a.seeds);
  if (!a.out.empty()) harness::prepare_output_dir(a.out);
  const auto pairs = theory::ar_ucb_regret_experiment(a.cfg, seeds);
  const auto s = theory::summarize(pairs);
  const double T = static_cast<double>(a.cfg.horizon);
  std::printf("grid %zu, T %zu, %zu seeds, beta %s, sigma %g\n", a.cfg.grid_size, a.cfg.horizon, seeds.size(),
              a.beta.c_str(), a.cfg.noise_sd);
  std::printf("  mean R(T): GP-UCB %.4f  AR-UCB %.4f  (ratio %.3f)\n", s.mean_regret_gp_ucb, s.mean_regret_ar_ucb,
              s.mean_regret_ar_ucb / s.mean_regret_gp_ucb);
  std::printf("  mean R(T)/T: GP-UCB %.4f  AR-UCB %.4f\n", s.mean_regret_gp_ucb / T, s.mean_regret_ar_ucb / T);
  std::printf("  runs above the regret bound: %zu of %zu\n", s.bound_violations, 2 * seeds.size());
  std::printf("  AR-UCB rounds: maximizer outside its envelope %zu, maximizer UCB rejected %zu, "
              "empty filter %zu\n",
              s.maximizer_outside_envelope, s.maximizer_ucb_rejected, s.empty_filter_rounds);
  std::printf("  AR-UCB checks: sandwich %zu, pointwise regret %zu, envelope gap %zu violations\n",
              s.sandwich_violations, s.pointwise_violations, s.gap_violations);
  if (!a.out.empty()) {
    const fs::path dir = a.out;
    std::ostringstream curve, runs;
    curve << "t,policy,mean_cumulative_regret\n";
    for (std::size_t t = 0; t < s.mean_curve_gp_ucb.size(); ++t) {
      curve << t + 1 << ",GP-UCB," << num(s.mean_curve_gp_ucb[t]) << '\n';
      curve << t + 1 << ",AR-UCB," << num(s.mean_curve_ar_ucb[t]) << '\n';
    }
    runs << "seed,policy,final_regret,lipschitz,gamma,bound,bound_holds,empty_filter_rounds,maximizer_ucb_rejected,"
            "pointwise_violations\n";
    for (const auto& p : pairs) {
      for (const auto* r : {&p.gp_ucb, &p.ar_ucb}) {
        runs << p.seed << ',' << theory::to_string(r->policy) << ',' << num(r->final_regret()) << ','
             << num(r->lipschitz) << ',' << num(r->gamma) << ',' << num(r->bound) << ',' << (r->bound_holds ? 1 : 0)
             << ',' << r->empty_filter_rounds << ',' << r->maximizer_ucb_rejected << ',' << r->pointwise_violations
             << '\n';
      }
    }
    harness::detail::write_text(dir / "regret_curve.csv", curve.str());
    harness::detail::write_text(dir / "regret_runs.csv", runs.str());
    std::vector<harness::Series> series(2);
    series[0].name = "GP-UCB";
    series[1].name = "AR-UCB";
    for (std::size_t t = 0; t < s.mean_curve_gp_ucb.size(); ++t) {
      for (auto& sr : series) sr.x.push_back(static_cast<double>(t + 1));
      series[0].y.push_back(s.mean_curve_gp_ucb[t]);
      series[1].y.push_back(s.mean_curve_ar_ucb[t]);
    }
    harness::PlotOptions opt;
    opt.title = "mean cumulative regret";
    opt.x_label = "round";
    opt.y_label = "R(t)";
    harness::detail::write_text(dir / "regret.svg", harness::render_svg(series, opt));
    std::printf("  wrote %s\n", (dir / "regret_curve.csv").string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lipbo: Bayesian optimization with Lipschitz bounds"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run BO/LBO experiments and write traces, a summary CSV and an SVG plot");
  run_cmd->add_option("--config", run.config, "flat key = value config file; flags override it")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--benchmark", run.benchmark, "benchmark name(s), comma separated");
  run_cmd->add_option("--acq", run.acq, "ucb, ts, ei, pi or random (comma list)");
  run_cmd->add_option("--lbo", run.lbo, "off, truncated or ar (comma list)");
  run_cmd->add_option("--l-mode", run.l_mode, "growing, known:<v>, true or off");
  run_cmd->add_option("--kappa", run.kappa, "growth factor of the growing L estimate (default 10)");
  run_cmd->add_option("--iters", run.iters, "evaluations per run (default 100)");
  run_cmd->add_option("--seeds", run.seeds, "N (1..N), a-b or a comma list (default 10)");
  run_cmd->add_option("--init-points", run.init_points, "initial uniform evaluations (default 2)");
  run_cmd->add_option("--explore-every", run.explore_every, "random step period, 0 disables (default 4)");
  run_cmd->add_option("--direct-budget", run.direct_budget, "DIRECT evaluations per step (default 2000)");
  run_cmd->add_option("--ts-candidates", run.ts_candidates, "Thompson candidates per step (default 1000)");
  run_cmd->add_option("--fit-starts", run.fit_starts, "hyperparameter restarts (default 5)");
  run_cmd->add_option("--noise-sd", run.noise_sd, "GP noise standard deviation (default 1e-3)");
  run_cmd->add_option("--beta", run.beta, "practical, practical:<c> or const:<v>");
  run_cmd->add_option("--true-l-samples", run.true_l_samples, "samples for --l-mode true (default 10000)");
  run_cmd->add_option("--log-scale", run.log_scale, "log-scale error axis: true or false");
  run_cmd->add_option("--out", run.out, "output directory");
  run_cmd->add_option("--jobs", run.jobs, "seeds run in parallel (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--wall-time", run.wall_time, "record per-iteration wall time in traces");

  std::size_t audit_samples = 200000;
  std::uint64_t audit_seed = 1;
  std::size_t audit_l_samples = 0;
  auto* audit_cmd = app.add_subcommand("audit-benchmarks", "check that no sample beats any reference optimum");
  audit_cmd->add_option("--samples", audit_samples, "grid plus uniform samples per benchmark");
  audit_cmd->add_option("--seed", audit_seed, "sampling seed");
  audit_cmd->add_option("--lipschitz-samples", audit_l_samples, "also print a sampled Lipschitz estimate");

  auto* theory_cmd = app.add_subcommand("theory", "desk-scale checks of the pruning and regret results");
  theory_cmd->require_subcommand(1);
  HarmlessArgs harmless;
  auto* harmless_cmd = theory_cmd->add_subcommand("harmless", "random search with and without Lipschitz pruning");
  harmless_cmd->add_option("--benchmark", harmless.benchmark, "benchmark name");
  harmless_cmd->add_option("--eps", harmless.eps, "target accuracy")->check(CLI::PositiveNumber);
  harmless_cmd->add_option("--trials", harmless.trials, "paired trials per arm")->check(CLI::PositiveNumber);
  harmless_cmd->add_option("--seed", harmless.seed, "base seed");
  harmless_cmd->add_option("--kappa", harmless.kappa, "growth factor for the growing arm")->check(CLI::PositiveNumber);
  harmless_cmd->add_option("--known-l", harmless.known_L, "L for the known-L arm (default: sampled estimate)");
  harmless_cmd->add_option("--l-samples", harmless.l_samples, "samples for the L estimate");
  harmless_cmd->add_option("--out", harmless.out, "directory for CSV and SVG output");

  RegretArgs regret;
  auto* regret_cmd = theory_cmd->add_subcommand("regret", "GP-UCB vs AR-UCB on a finite 1-D grid");
  regret_cmd->add_option("--grid", regret.cfg.grid_size, "grid points");
  regret_cmd->add_option("--T", regret.cfg.horizon, "rounds");
  regret_cmd->add_option("--seeds", regret.seeds, "N (1..N), a-b or a comma list");
  regret_cmd->add_option("--beta", regret.beta, "literal or srinivas");
  regret_cmd->add_option("--delta", regret.cfg.delta, "confidence parameter");
  regret_cmd->add_option("--length-scale", regret.cfg.length_scale, "squared-exponential length scale");
  regret_cmd->add_option("--noise-sd", regret.cfg.noise_sd, "model noise standard deviation");
  regret_cmd->add_option("--out", regret.out, "directory for CSV and SVG output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run, *run_cmd);
    if (*audit_cmd) return cmd_audit(audit_samples, audit_seed, audit_l_samples);
    if (*harmless_cmd) return cmd_harmless(harmless);
    if (*regret_cmd) return cmd_regret(regret);
  } catch (const lipbo::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
