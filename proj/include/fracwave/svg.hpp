// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Self-contained SVG line charts (polylines plus axes); no external renderer.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fracwave/errors.hpp"

namespace fracwave {

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
  std::vector<ChartSeries> series;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace detail

inline void write_svg_chart(const std::string& path, const ChartSpec& spec) {
  const double W = 800, H = 520;
  const double ml = 80, mr = 24, mt = 48, mb = 56;  // margins
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool have = false;
  auto y_val = [&](double y) { return spec.log_y ? std::log10(std::max(y, 1e-300)) : y; };
  for (const auto& s : spec.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double xv = s.x[i], yv = y_val(s.y[i]);
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      if (!have) {
        x_lo = x_hi = xv;
        y_lo = y_hi = yv;
        have = true;
      }
      x_lo = std::min(x_lo, xv);
      x_hi = std::max(x_hi, xv);
      y_lo = std::min(y_lo, yv);
      y_hi = std::max(y_hi, yv);
    }
  if (!have) throw config_error("write_svg_chart: no finite data");
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;

  auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y_val(y) - y_lo) / (y_hi - y_lo) * (H - mt - mb); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot open for writing: " + path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        "font-family=\"sans-serif\">"
     << spec.title << "</text>\n";

  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
     << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
     << "\" stroke=\"black\"/>\n";

  const int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / nticks;
    const double gx = px(fx);
    os << "<line x1=\"" << detail::svg_num(gx) << "\" y1=\"" << H - mb << "\" x2=\""
       << detail::svg_num(gx) << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << detail::svg_num(gx) << "\" y=\"" << H - mb + 20
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
       << detail::tick_label(fx) << "</text>\n";
    const double fy = y_lo + (y_hi - y_lo) * i / nticks;
    const double gy = H - mb - (fy - y_lo) / (y_hi - y_lo) * (H - mt - mb);
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::svg_num(gy) << "\" x2=\"" << ml
       << "\" y2=\"" << detail::svg_num(gy) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << detail::svg_num(gy + 4)
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
       << detail::tick_label(spec.log_y ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << spec.xlabel
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        "transform=\"rotate(-90 18 "
     << (mt + H - mb) / 2 << ")\">" << spec.ylabel << "</text>\n";

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    os << "<polyline fill=\"none\" stroke=\"" << palette[k % 5] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(y_val(s.y[i]))) continue;
      os << detail::svg_num(px(s.x[i])) << "," << detail::svg_num(py(s.y[i])) << " ";
    }
    os << "\"/>\n";
    if (!s.label.empty())
      os << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 + 16 * static_cast<double>(k)
         << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
         << palette[k % 5] << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace fracwave
