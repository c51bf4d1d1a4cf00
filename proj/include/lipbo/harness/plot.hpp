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

#ifndef LIPBO_HARNESS_PLOT_HPP
#define LIPBO_HARNESS_PLOT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "lipbo/core/types.hpp"

namespace lipbo::harness {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "function evaluations";
  std::string y_label = "absolute error";
  bool log_y = false;
  int width = 720;
  int height = 440;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt(double v, const char* spec = "%.2f") {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), spec, v);
  return buf.data();
}

inline constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                        "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace detail

/**
 * A line chart with one <polyline> per series. On a log axis, values at or
 * below zero are drawn at a floor one decade under the smallest positive value.
 */
inline std::string render_svg(const std::vector<Series>& series, const PlotOptions& opt) {
  if (series.empty()) throw Error("render_svg: no series");
  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;

  double x_min = kInf, x_max = -kInf, y_min = kInf, y_max = -kInf, min_pos = kInf;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw Error("render_svg: x/y length mismatch in " + s.name);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      if (!std::isfinite(s.y[i])) continue;
      if (s.y[i] > 0.0) min_pos = std::min(min_pos, s.y[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (!std::isfinite(x_min)) x_min = 0.0, x_max = 1.0;
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  const double floor_pos = std::isfinite(min_pos) ? min_pos / 10.0 : 1e-12;
  auto ty = [&](double v) { return opt.log_y ? std::log10(std::max(v, floor_pos)) : v; };
  double lo = opt.log_y ? ty(floor_pos) : (std::isfinite(y_min) ? std::min(0.0, y_min) : 0.0);
  double hi = std::isfinite(y_max) ? ty(y_max) : 1.0;
  if (!(hi > lo)) hi = lo + 1.0;

  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - lo) / (hi - lo)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << detail::xml_escape(opt.title) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_min + (x_max - x_min) * k / 4.0;
    const double yv = lo + (hi - lo) * k / 4.0;
    const double yp = top + (1.0 - k / 4.0) * ph;
    os << "<text x=\"" << detail::fmt(px(xv)) << "\" y=\"" << top + ph + 18
       << "\" text-anchor=\"middle\" font-size=\"11\">" << detail::fmt(xv, "%g") << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << detail::fmt(yp + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
       << detail::fmt(opt.log_y ? std::pow(10.0, yv) : yv, "%.3g") << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << opt.height - 16 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << detail::xml_escape(opt.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 "
     << top + ph / 2 << ")\">" << detail::xml_escape(opt.y_label + (opt.log_y ? " (log)" : "")) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = detail::kPalette[k % detail::kPalette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << detail::fmt(px(s.x[i])) << ',' << detail::fmt(py(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    const double ly = top + 14.0 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 32 << "\" y2=\""
       << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\" font-size=\"12\">" << detail::xml_escape(s.name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace lipbo::harness

#endif  // LIPBO_HARNESS_PLOT_HPP
