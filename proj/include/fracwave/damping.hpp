// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Damping coefficients gamma >= 0 on the grid and the three geometric
// certificates the decay regimes hinge on: essential infimum, thickness of
// {gamma >= eps}, and the 1-D geometric control window integral.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracwave/errors.hpp"
#include "fracwave/grid.hpp"

namespace fracwave {

enum class DampingFamily { uniform, stripes, bumps, compact_support, custom };

inline const char* family_name(DampingFamily f) {
  switch (f) {
    case DampingFamily::uniform: return "uniform";
    case DampingFamily::stripes: return "stripes";
    case DampingFamily::bumps: return "bumps";
    case DampingFamily::compact_support: return "compact-support";
    default: return "custom";
  }
}

struct DampingProfile {
  GridPtr grid;
  std::vector<double> gamma;
  double sup_norm = 0.0;
  DampingFamily family = DampingFamily::custom;

  static DampingProfile from_samples(GridPtr grid, std::vector<double> samples,
                                     DampingFamily family = DampingFamily::custom) {
    if (samples.size() != grid->size())
      throw config_error("DampingProfile: sample count does not match grid");
    double mx = 0.0;
    for (double v : samples) {
      if (!std::isfinite(v)) throw numeric_error("DampingProfile: non-finite sample");
      if (v < 0.0) throw config_error("DampingProfile: gamma must be nonnegative");
      mx = std::max(mx, v);
    }
    return DampingProfile{std::move(grid), std::move(samples), mx, family};
  }

  // Indicator of {gamma >= eps}.
  std::vector<std::uint8_t> level_set(double eps) const {
    std::vector<std::uint8_t> m(gamma.size());
    for (std::size_t i = 0; i < gamma.size(); ++i) m[i] = gamma[i] >= eps ? 1 : 0;
    return m;
  }
};

inline DampingProfile make_uniform(GridPtr grid, double c0) {
  if (!(c0 >= 0.0)) throw config_error("uniform damping: level must be >= 0");
  std::vector<double> val(grid->size(), c0);
  return DampingProfile::from_samples(std::move(grid), std::move(val), DampingFamily::uniform);
}

// Periodic stripes along the first axis: gamma = height where
// (x mod period) < duty * period.
inline DampingProfile make_stripes(GridPtr grid, double period, double duty, double height) {
  if (!(period > 0.0)) throw config_error("stripes: period must be > 0");
  if (!(duty > 0.0 && duty < 1.0)) throw config_error("stripes: duty must be in (0,1)");
  if (!(height >= 0.0)) throw config_error("stripes: height must be >= 0");
  const TorusGrid& g = *grid;
  std::vector<double> val(g.size());
  const double on_len = duty * period;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(i)[0];
    const double r = x - period * std::floor(x / period);
    // half-open stripe cells: sample is on the stripe iff (x mod period) < duty*period
    val[i] = (r < on_len) ? height : 0.0;
  }
  return DampingProfile::from_samples(std::move(grid), std::move(val), DampingFamily::stripes);
}

// Single block of the given width centered at the origin (per-axis extent
// [-width/2, width/2] with periodic wrap).
inline DampingProfile make_compact_support(GridPtr grid, double width, double height) {
  if (!(width > 0.0 && width <= grid->box_len()))
    throw config_error("compact-support: width must be in (0, box_len]");
  if (!(height >= 0.0)) throw config_error("compact-support: height must be >= 0");
  const TorusGrid& g = *grid;
  std::vector<double> val(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.coord(i);
    bool in = true;
    for (int a = 0; a < g.dim(); ++a) {
      const double dist = std::min(x[a], g.box_len() - x[a]);  // distance to origin, wrapped
      if (dist > width / 2.0 + 1e-12) in = false;
    }
    val[i] = in ? height : 0.0;
  }
  return DampingProfile::from_samples(std::move(grid), std::move(val),
                                      DampingFamily::compact_support);
}

// Sum of periodized Gaussians h * exp(-|x - c|^2 / (2 sigma^2)).
inline DampingProfile make_bumps(GridPtr grid, const std::vector<std::array<double, 2>>& centers,
                                 double sigma, double height) {
  if (!(sigma > 0.0)) throw config_error("bumps: sigma must be > 0");
  if (!(height >= 0.0)) throw config_error("bumps: height must be >= 0");
  const TorusGrid& g = *grid;
  for (const auto& c : centers)
    for (int a = 0; a < g.dim(); ++a)
      if (c[a] < 0.0 || c[a] >= g.box_len())
        throw config_error("bumps: center outside the torus [0, box_len)");
  std::vector<double> val(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.coord(i);
    for (const auto& c : centers) {
      double d_sq = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        double d = std::abs(x[a] - c[a]);
        d = std::min(d, g.box_len() - d);
        d_sq += d * d;
      }
      val[i] += height * std::exp(-d_sq / (2.0 * sigma * sigma));
    }
  }
  return DampingProfile::from_samples(std::move(grid), std::move(val), DampingFamily::bumps);
}

inline double ess_inf(const DampingProfile& p) {
  return *std::min_element(p.gamma.begin(), p.gamma.end());
}

// Thickness certificate at level eps and cube side L.  The scan covers all
// lattice-aligned placements with periodic wrap; the density is the fraction
// of set samples in the worst window.  The continuum infimum over real
// translates is lower-bounded by rho minus boundary_slack.
struct ThickCertificate {
  double eps = 0.0;
  double cube_len = 0.0;
  double rho = 0.0;
  bool thick = false;
  double boundary_slack = 0.0;
};

inline ThickCertificate thickness(const DampingProfile& p, double eps, double cube_len) {
  if (!(eps > 0.0)) throw config_error("thickness: eps must be > 0");
  const TorusGrid& g = *p.grid;
  if (!(cube_len > 0.0 && cube_len <= g.box_len() + 1e-12))
    throw config_error("thickness: cube side must be in (0, box_len]");

  const std::size_t n = g.points_per_axis();
  const std::size_t w = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cube_len / g.spacing())));
  const auto mask = p.level_set(eps);

  std::size_t worst = g.size() + 1;
  if (g.dim() == 1) {
    // circular sliding window over n placements
    std::size_t cnt = 0;
    for (std::size_t j = 0; j < w; ++j) cnt += mask[j % n];
    worst = cnt;
    for (std::size_t start = 1; start < n; ++start) {
      cnt -= mask[start - 1];
      cnt += mask[(start - 1 + w) % n];
      worst = std::min(worst, cnt);
    }
  } else {
    // periodic summed-area table, (n+1)^2
    std::vector<std::size_t> sat((n + 1) * (n + 1), 0);
    auto at = [&](std::size_t r, std::size_t c) -> std::size_t& { return sat[r * (n + 1) + c]; };
    for (std::size_t r = 1; r <= n; ++r)
      for (std::size_t c = 1; c <= n; ++c)
        at(r, c) = static_cast<std::size_t>(mask[(r - 1) * n + (c - 1)]) + at(r - 1, c) +
                   at(r, c - 1) - at(r - 1, c - 1);
    auto range_cnt = [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) {
      // half-open [r0,r1) x [c0,c1) without wrap
      return at(r1, c1) - at(r0, c1) - at(r1, c0) + at(r0, c0);
    };
    auto wrapped_1d = [&](std::size_t s) { return s % n; };
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        // split the wrapped window into at most 4 rectangles
        const std::size_t r_end = r + w, c_end = c + w;
        std::size_t cnt = 0;
        const std::size_t r1 = std::min<std::size_t>(r_end, n);
        const std::size_t c1 = std::min<std::size_t>(c_end, n);
        cnt += range_cnt(r, r1, c, c1);
        if (r_end > n) cnt += range_cnt(0, wrapped_1d(r_end), c, c1);
        if (c_end > n) cnt += range_cnt(r, r1, 0, wrapped_1d(c_end));
        if (r_end > n && c_end > n) cnt += range_cnt(0, wrapped_1d(r_end), 0, wrapped_1d(c_end));
        worst = std::min(worst, cnt);
      }
    }
  }

  const double win_samples = g.dim() == 1 ? static_cast<double>(w) : static_cast<double>(w) * w;
  ThickCertificate cert;
  cert.eps = eps;
  cert.cube_len = cube_len;
  cert.rho = static_cast<double>(worst) / win_samples;
  cert.thick = cert.rho >= 1.0 / static_cast<double>(n);
  cert.boundary_slack = static_cast<double>(g.dim()) / static_cast<double>(w);
  return cert;
}

// min over window placements of the periodic integral of gamma over a window
// of the given length (1-D geometric control functional).
inline double gcc_1d(const DampingProfile& p, double window_len) {
  const TorusGrid& g = *p.grid;
  if (g.dim() != 1) throw config_error("gcc_1d: only defined in dimension 1");
  if (!(window_len > 0.0 && window_len <= g.box_len() + 1e-12))
    throw config_error("gcc_1d: window must be in (0, box_len]");
  const std::size_t n = g.points_per_axis();
  const std::size_t w = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(window_len / g.spacing())));
  double acc = 0.0;
  for (std::size_t j = 0; j < w; ++j) acc += p.gamma[j % n];
  double worst = acc;
  for (std::size_t start = 1; start < n; ++start) {
    acc -= p.gamma[start - 1];
    acc += p.gamma[(start - 1 + w) % n];
    worst = std::min(worst, acc);
  }
  return worst * g.spacing();
}

// CSV serialization: x[,y],gamma with one row per sample.
inline void write_damping_csv(const DampingProfile& p, std::ostream& os) {
  const TorusGrid& g = *p.grid;
  os << (g.dim() == 1 ? "x,gamma\n" : "x,y,gamma\n");
  char buf[96];
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.coord(i);
    if (g.dim() == 1)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[0], p.gamma[i]);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], x[1], p.gamma[i]);
    os << buf;
  }
}

inline DampingProfile read_damping_csv(GridPtr grid, std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw config_error("damping csv: empty file");
  std::vector<double> val;
  val.reserve(grid->size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto pos = line.rfind(',');
    if (pos == std::string::npos) throw config_error("damping csv: malformed row");
    val.push_back(std::stod(line.substr(pos + 1)));
  }
  return DampingProfile::from_samples(std::move(grid), std::move(val));
}

}  // namespace fracwave
