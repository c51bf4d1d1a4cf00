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

#ifndef LIPBO_HARNESS_IO_HPP
#define LIPBO_HARNESS_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lipbo/core/types.hpp"
#include "lipbo/harness/aggregate.hpp"
#include "lipbo/harness/config.hpp"
#include "lipbo/harness/experiment.hpp"
#include "lipbo/harness/plot.hpp"

namespace lipbo::harness {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

inline constexpr const char* kSummaryCsvHeader = "iteration,method,mean_abs_error,std_abs_error,q10,q90";

namespace detail {

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double number_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline std::string file_safe(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

inline std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// Run settings echoed into each trace file.
inline Json config_to_json(const RunConfig& cfg) {
  Json j;
  j["acquisition"] = cfg.acquisition.name();
  j["beta"] = beta_label(cfg.acquisition.beta);
  j["lipschitz_mode"] = cfg.lipschitz.label();
  j["kappa"] = cfg.lipschitz.kappa;
  j["iterations"] = cfg.iterations;
  j["init_points"] = cfg.init_points;
  j["explore_every"] = cfg.explore_every;
  j["direct_budget"] = cfg.direct_budget;
  j["ts_candidates"] = cfg.ts_candidates;
  j["fit_starts"] = cfg.fit_starts;
  j["noise_sd"] = cfg.noise_sd;
  return j;
}

/**
 * Trace as JSON. Wall-clock times are only written when requested, so that
 * repeated runs produce identical files.
 */
inline Json trace_to_json(const RunTrace& trace, const RunConfig* cfg = nullptr, bool include_wall_time = false) {
  Json j;
  j["benchmark"] = trace.benchmark;
  j["method"] = trace.method;
  j["seed"] = trace.seed;
  j["ref_optimum"] = trace.ref_optimum;
  if (cfg) j["config"] = config_to_json(*cfg);
  j["failed"] = trace.failed;
  j["error"] = trace.error;
  j["warnings"] = trace.warnings;
  Json records = Json::array();
  for (const auto& r : trace.records) {
    Json rec;
    rec["t"] = r.t;
    rec["x"] = std::vector<double>(r.x.data(), r.x.data() + r.x.size());
    rec["y"] = r.y;
    rec["best_so_far"] = r.best_so_far;
    rec["L_hat"] = detail::number_or_null(r.L_hat);
    rec["acq_value"] = detail::number_or_null(r.acq_value);
    rec["selection_kind"] = to_string(r.kind);
    if (include_wall_time) rec["wall_time"] = r.wall_time;
    rec["abs_error"] = r.abs_error;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  j["abs_error"] = trace.abs_error_curve();
  return j;
}

inline RunTrace trace_from_json(const Json& j) {
  RunTrace trace;
  trace.benchmark = j.at("benchmark").get<std::string>();
  trace.method = j.at("method").get<std::string>();
  trace.seed = j.at("seed").get<std::uint64_t>();
  trace.ref_optimum = j.at("ref_optimum").get<double>();
  trace.failed = j.at("failed").get<bool>();
  trace.error = j.at("error").get<std::string>();
  trace.warnings = j.at("warnings").get<std::vector<std::string>>();
  for (const auto& rec : j.at("records")) {
    IterationRecord r;
    r.t = rec.at("t").get<std::size_t>();
    const auto xs = rec.at("x").get<std::vector<double>>();
    r.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    r.y = rec.at("y").get<double>();
    r.best_so_far = rec.at("best_so_far").get<double>();
    r.L_hat = detail::number_from(rec.at("L_hat"));
    r.acq_value = detail::number_from(rec.at("acq_value"));
    r.kind = selection_kind_from_string(rec.at("selection_kind").get<std::string>());
    if (rec.contains("wall_time")) r.wall_time = rec.at("wall_time").get<double>();
    r.abs_error = rec.at("abs_error").get<double>();
    trace.records.push_back(std::move(r));
  }
  return trace;
}

inline void write_trace(const RunTrace& trace, const fs::path& path, const RunConfig* cfg = nullptr,
                        bool include_wall_time = false) {
  detail::write_text(path, trace_to_json(trace, cfg, include_wall_time).dump(1) + "\n");
}

inline RunTrace load_trace(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read trace '" + path.string() + "'");
  try {
    return trace_from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed trace '" + path.string() + "': " + e.what());
  }
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << kSummaryCsvHeader << '\n';
  for (const auto& r : rows) {
    os << r.iteration << ',' << r.method << ',' << detail::csv_number(r.mean_abs_error) << ','
       << detail::csv_number(r.std_abs_error) << ',' << detail::csv_number(r.q10) << ',' << detail::csv_number(r.q90)
       << '\n';
  }
  return os.str();
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows, const fs::path& path) {
  detail::write_text(path, summary_csv(rows));
}

/// Mean error curves, one series per method.
inline std::vector<Series> summary_series(const std::vector<SummaryRow>& rows) {
  std::vector<Series> out;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Series& s) { return s.name == r.method; });
    if (it == out.end()) {
      out.push_back({r.method, {}, {}});
      it = out.end() - 1;
    }
    it->x.push_back(static_cast<double>(r.iteration));
    it->y.push_back(r.mean_abs_error);
  }
  return out;
}

/**
 * Creates `dir` (and `dir/traces`) and checks it is writable. Called before
 * any run starts so that a bad path fails fast.
 */
inline void prepare_output_dir(const fs::path& dir) {
  if (dir.empty()) throw ConfigError("no output directory given");
  std::error_code ec;
  fs::create_directories(dir / "traces", ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  const fs::path probe = dir / ".write-probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) throw ConfigError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

inline fs::path trace_path(const fs::path& dir, const RunTrace& trace) {
  return dir / "traces" /
         (detail::file_safe(trace.benchmark) + "__" + detail::file_safe(trace.method) + "__seed" +
          std::to_string(trace.seed) + ".json");
}

struct OutputFiles {
  std::vector<fs::path> traces;
  fs::path csv;
  fs::path svg;
};

/// Writes every trace, the aggregate CSV and one SVG for the figure group.
inline OutputFiles emit_outputs(const std::vector<SummaryRow>& summary, const std::vector<RunTrace>& traces,
                                const std::vector<RunConfig>& configs, const fs::path& dir, const std::string& title,
                                bool log_scale, bool include_wall_time = false) {
  prepare_output_dir(dir);
  OutputFiles files;
  for (const auto& tr : traces) {
    const RunConfig* cfg = nullptr;
    for (const auto& c : configs)
      if (c.method_name() == tr.method) cfg = &c;
    files.traces.push_back(trace_path(dir, tr));
    write_trace(tr, files.traces.back(), cfg, include_wall_time);
  }
  files.csv = dir / (detail::file_safe(title) + "_summary.csv");
  write_summary_csv(summary, files.csv);
  files.svg = dir / (detail::file_safe(title) + ".svg");
  PlotOptions opt;
  opt.title = title;
  opt.log_y = log_scale;
  detail::write_text(files.svg, render_svg(summary_series(summary), opt));
  return files;
}

}  // namespace lipbo::harness

#endif  // LIPBO_HARNESS_IO_HPP
