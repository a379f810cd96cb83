// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracwave/errors.hpp"

namespace fracwave {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

inline LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw config_error("linear_fit: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw config_error("linear_fit: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    acc += r * r;
  }
  f.rms_residual = std::sqrt(acc / n);
  return f;
}

// Exponential minorant c * exp(-C x) <= y over the samples: log-linear least
// squares followed by a rigid downward shift, so the envelope touches the
// data from below.  A nonnegative fitted slope degenerates to a constant
// floor (C = 0, c = min y).
struct EnvelopeFit {
  double c = 0.0;
  double C = 0.0;
  double max_above = 0.0;  // largest log-gap of a sample above the envelope
  bool constant_floor = false;
};

inline EnvelopeFit envelope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 8) throw config_error("envelope_fit: need >= 8 points");
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw config_error("envelope_fit: nonpositive sample");
    ly[i] = std::log(y[i]);
  }
  const LineFit lf = linear_fit(x, ly);
  EnvelopeFit env;
  if (lf.slope > 0.0) {
    env.constant_floor = true;
    env.C = 0.0;
    double mn = ly[0];
    for (double v : ly) mn = std::min(mn, v);
    env.c = std::exp(mn);
    double mx = 0.0;
    for (double v : ly) mx = std::max(mx, v - mn);
    env.max_above = mx;
    return env;
  }
  double shift = 0.0;  // lower the line until it minorizes every point
  for (std::size_t i = 0; i < x.size(); ++i)
    shift = std::max(shift, (lf.intercept + lf.slope * x[i]) - ly[i]);
  env.C = -lf.slope;
  env.c = std::exp(lf.intercept - shift);
  double mx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    mx = std::max(mx, ly[i] - (lf.intercept - shift + lf.slope * x[i]));
  env.max_above = mx;
  return env;
}

}  // namespace fracwave
