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

#ifndef LIPBO_HARNESS_CONFIG_HPP
#define LIPBO_HARNESS_CONFIG_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lipbo/acquisition/acquisition.hpp"
#include "lipbo/core/types.hpp"
#include "lipbo/direct/direct.hpp"
#include "lipbo/gp/kernel.hpp"
#include "lipbo/lipschitz/lipschitz.hpp"

namespace lipbo::harness {

enum class LipschitzKind { Off, Growing, Known, OfflineTrue };

/// How the loop obtains its Lipschitz estimate.
struct LipschitzSetting {
  LipschitzKind kind = LipschitzKind::Growing;
  double kappa = lipschitz::kDefaultKappa;  // Growing
  double value = 0.0;                       // Known

  std::string label() const {
    switch (kind) {
      case LipschitzKind::Off: return "off";
      case LipschitzKind::Growing: return "growing";
      case LipschitzKind::Known: {
        std::ostringstream os;
        os << "known:" << value;
        return os.str();
      }
      case LipschitzKind::OfflineTrue: return "true";
    }
    return "off";
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": not a number: '" + s + "'");
  }
}

inline std::size_t parse_count(const std::string& s, const std::string& what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ConfigError(what + ": not a non-negative integer: '" + s + "'");
  return static_cast<std::size_t>(std::stoull(s));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace detail

/// "off", "growing", "known:<v>" or "true".
inline LipschitzSetting parse_lipschitz_mode(const std::string& text, double kappa = lipschitz::kDefaultKappa) {
  const std::string s = detail::lower(detail::trim(text));
  LipschitzSetting out;
  out.kappa = kappa;
  if (s == "off") {
    out.kind = LipschitzKind::Off;
  } else if (s == "growing") {
    out.kind = LipschitzKind::Growing;
  } else if (s == "true") {
    out.kind = LipschitzKind::OfflineTrue;
  } else if (s.rfind("known:", 0) == 0) {
    out.kind = LipschitzKind::Known;
    out.value = detail::parse_double(s.substr(6), "l-mode known");
    if (!(out.value >= 0.0)) throw ConfigError("l-mode known: L must be >= 0");
  } else {
    throw ConfigError("unknown l-mode '" + text + "' (expected growing, known:<v>, true or off)");
  }
  if (!(out.kappa > 0.0)) throw ConfigError("kappa must be > 0");
  return out;
}

inline acq::BaseAcquisition parse_base(const std::string& text) {
  const std::string s = detail::lower(detail::trim(text));
  if (s == "ucb") return acq::BaseAcquisition::UCB;
  if (s == "ts") return acq::BaseAcquisition::TS;
  if (s == "ei") return acq::BaseAcquisition::EI;
  if (s == "pi") return acq::BaseAcquisition::PI;
  if (s == "random") return acq::BaseAcquisition::Random;
  throw ConfigError("unknown acquisition '" + text + "' (expected ucb, ts, ei, pi or random)");
}

inline acq::LboMode parse_lbo(const std::string& text) {
  const std::string s = detail::lower(detail::trim(text));
  if (s == "off" || s == "none") return acq::LboMode::None;
  if (s == "truncated") return acq::LboMode::Truncated;
  if (s == "ar") return acq::LboMode::AcceptReject;
  throw ConfigError("unknown lbo mode '" + text + "' (expected off, truncated or ar)");
}

/// "practical", "practical:<c>" or "const:<v>".
inline acq::BetaSchedule parse_beta(const std::string& text) {
  const std::string s = detail::lower(detail::trim(text));
  if (s == "practical") return acq::PracticalBeta{};
  if (s.rfind("practical:", 0) == 0) return acq::PracticalBeta{detail::parse_double(s.substr(10), "beta")};
  if (s.rfind("const:", 0) == 0) {
    const double v = detail::parse_double(s.substr(6), "beta");
    if (!(v >= 0.0)) throw ConfigError("beta: constant must be >= 0");
    return acq::ConstantBeta{v};
  }
  throw ConfigError("unknown beta schedule '" + text + "' (expected practical, practical:<c> or const:<v>)");
}

/// Inverse of parse_beta (the theorem schedule has no flag form).
inline std::string beta_label(const acq::BetaSchedule& beta) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* p = std::get_if<acq::PracticalBeta>(&beta)) {
    os << "practical:" << p->c;
  } else if (const auto* c = std::get_if<acq::ConstantBeta>(&beta)) {
    os << "const:" << c->value;
  } else {
    const auto& t = std::get<acq::TheoremBeta>(beta);
    os << (t.srinivas ? "srinivas:" : "theorem:") << t.space_size << ":" << t.delta;
  }
  return os.str();
}

/// "N" (seeds 1..N), "a-b" (inclusive range) or "s1,s2,...".
inline std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  const std::string s = detail::trim(text);
  std::vector<std::uint64_t> out;
  if (s.find(',') != std::string::npos) {
    for (const auto& item : detail::split(s, ',')) out.push_back(detail::parse_count(item, "seeds"));
  } else if (const auto dash = s.find('-'); dash != std::string::npos) {
    const auto a = detail::parse_count(detail::trim(s.substr(0, dash)), "seeds");
    const auto b = detail::parse_count(detail::trim(s.substr(dash + 1)), "seeds");
    if (b < a) throw ConfigError("seeds: empty range '" + text + "'");
    for (auto k = a; k <= b; ++k) out.push_back(k);
  } else {
    const auto n = detail::parse_count(s, "seeds");
    for (std::uint64_t k = 1; k <= n; ++k) out.push_back(k);
  }
  if (out.empty()) throw ConfigError("seeds: no seeds given");
  return out;
}

struct RunConfig {
  std::string benchmark = "branin-2";
  acq::AcquisitionSpec acquisition{acq::BaseAcquisition::EI, acq::LboMode::None, acq::PracticalBeta{}};
  LipschitzSetting lipschitz;
  std::size_t iterations = 100;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t init_points = 2;
  std::size_t explore_every = 4;  // 0 disables exploration steps
  std::size_t direct_budget = direct::kDefaultBudget;
  std::size_t ts_candidates = 1000;
  std::size_t fit_starts = 5;
  double noise_sd = gp::kDefaultNoiseSd;
  std::size_t true_L_samples = 10000;  // sample count for the offline "true" L
  std::optional<bool> log_scale_error;  // unset: the benchmark's default
  std::string out_dir;
  bool record_wall_time = false;

  void validate() const {
    acquisition.validate();
    if (init_points < 1) throw ConfigError("init_points must be >= 1");
    if (iterations < init_points) throw ConfigError("iterations must be >= init_points");
    if (explore_every == 1) throw ConfigError("explore_every must be 0 (disabled) or >= 2");
    if (direct_budget < 1) throw ConfigError("direct_budget must be >= 1");
    if (ts_candidates < 1) throw ConfigError("ts_candidates must be >= 1");
    if (fit_starts < 1) throw ConfigError("fit_starts must be >= 1");
    if (!(noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (lipschitz.kind == LipschitzKind::OfflineTrue && true_L_samples < 2) throw ConfigError("true_L_samples must be >= 2");
  }

  /// Method label used in outputs, e.g. "TEI" or "AR-TS[known:3]".
  std::string method_name() const {
    std::string name = acquisition.name();
    if (acquisition.lbo != acq::LboMode::None && lipschitz.kind != LipschitzKind::Growing)
      name += "[" + lipschitz.label() + "]";
    return name;
  }
};

/**
 * Applies one key/value setting. Keys mirror the command-line flags
 * (benchmark, acq, lbo, l_mode, kappa, iters, seeds, init_points,
 * explore_every, direct_budget, ts_candidates, fit_starts, noise_sd, beta,
 * true_l_samples, log_scale, out); dashes and underscores are interchangeable.
 */
inline void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  std::string key = detail::lower(detail::trim(raw_key));
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = detail::trim(value);
  if (key == "benchmark") {
    cfg.benchmark = v;
  } else if (key == "acq") {
    cfg.acquisition.base = parse_base(v);
  } else if (key == "lbo") {
    cfg.acquisition.lbo = parse_lbo(v);
  } else if (key == "l_mode") {
    cfg.lipschitz = parse_lipschitz_mode(v, cfg.lipschitz.kappa);
  } else if (key == "kappa") {
    cfg.lipschitz.kappa = detail::parse_double(v, "kappa");
    if (!(cfg.lipschitz.kappa > 0.0)) throw ConfigError("kappa must be > 0");
  } else if (key == "iters" || key == "iterations") {
    cfg.iterations = detail::parse_count(v, key);
  } else if (key == "seeds") {
    cfg.seeds = parse_seeds(v);
  } else if (key == "init_points") {
    cfg.init_points = detail::parse_count(v, key);
  } else if (key == "explore_every") {
    cfg.explore_every = detail::parse_count(v, key);
  } else if (key == "direct_budget") {
    cfg.direct_budget = detail::parse_count(v, key);
  } else if (key == "ts_candidates") {
    cfg.ts_candidates = detail::parse_count(v, key);
  } else if (key == "fit_starts") {
    cfg.fit_starts = detail::parse_count(v, key);
  } else if (key == "noise_sd") {
    cfg.noise_sd = detail::parse_double(v, key);
  } else if (key == "beta") {
    cfg.acquisition.beta = parse_beta(v);
  } else if (key == "true_l_samples") {
    cfg.true_L_samples = detail::parse_count(v, key);
  } else if (key == "log_scale") {
    const std::string b = detail::lower(v);
    if (b == "true" || b == "1" || b == "yes") cfg.log_scale_error = true;
    else if (b == "false" || b == "0" || b == "no") cfg.log_scale_error = false;
    else throw ConfigError("log_scale: expected true or false");
  } else if (key == "out") {
    cfg.out_dir = v;
  } else {
    throw ConfigError("unknown config key '" + raw_key + "'");
  }
}

/// Parses flat "key = value" text; '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    out[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

/// Reads a config file on top of `base`. Keys are applied in a fixed order so
/// that kappa is set before l_mode regardless of file order.
inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  auto kv = parse_key_values(in);
  if (auto it = kv.find("kappa"); it != kv.end()) {
    apply_setting(base, it->first, it->second);
    kv.erase(it);
  }
  for (const auto& [k, v] : kv) apply_setting(base, k, v);
  return base;
}

}  // namespace lipbo::harness

#endif  // LIPBO_HARNESS_CONFIG_HPP
