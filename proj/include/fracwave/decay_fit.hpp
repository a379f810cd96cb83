// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Decay-model classification of energy traces.  Three candidate laws are
// fitted by least squares in transformed coordinates and compared by RMS
// log-residual:
//   exponential  E ~ a exp(-w t)        on (t, log E)
//   polynomial   E ~ a t^-p             on (log t, log E)
//   logarithmic  E ~ a (log(e+t))^-q    on (log log(e+t), log E)
// Near-ties are reported as ambiguous rather than resolved by luck.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fracwave/errors.hpp"
#include "fracwave/evolution.hpp"
#include "fracwave/fitting.hpp"

namespace fracwave {

enum class DecayModel { flat, exponential, polynomial, logarithmic };

inline const char* model_name(DecayModel m) {
  switch (m) {
    case DecayModel::exponential: return "exponential";
    case DecayModel::polynomial: return "polynomial";
    case DecayModel::logarithmic: return "logarithmic";
    default: return "flat";
  }
}

struct DecayReport {
  DecayModel model = DecayModel::flat;
  double rate = 0.0;       // w | p | q of the selected model
  double amplitude = 0.0;  // a of the selected model
  double window_lo = 0.0;
  double window_hi = 0.0;
  double rms_residual = 0.0;        // log-space, selected model
  double model_selection_margin = 1.0;  // second-best RMS / best RMS, >= 1
  bool ambiguous = false;               // margin < 1.05
  std::array<double, 3> rms_all = {0.0, 0.0, 0.0};  // exp, poly, log
};

inline DecayReport fit_decay(const std::vector<double>& times,
                             const std::vector<double>& energies, double window_lo,
                             double window_hi) {
  if (times.size() != energies.size()) throw config_error("fit_decay: size mismatch");
  if (!(window_lo < window_hi)) throw config_error("fit_decay: empty window");

  std::vector<double> t, le;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < window_lo - 1e-12 || times[i] > window_hi + 1e-12) continue;
    if (!(energies[i] > 0.0))
      throw config_error("fit_decay: nonpositive energy inside the fit window");
    t.push_back(times[i]);
    le.push_back(std::log(energies[i]));
  }
  if (t.size() < 16) throw config_error("fit_decay: need >= 16 samples in the window");

  // exponential: log E vs t
  const LineFit fe = linear_fit(t, le);

  // polynomial: log E vs log t (positive times only)
  std::vector<double> lt, le_p;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] <= 0.0) continue;
    lt.push_back(std::log(t[i]));
    le_p.push_back(le[i]);
  }
  if (lt.size() < 16) throw config_error("fit_decay: need >= 16 positive-time samples");
  const LineFit fp = linear_fit(lt, le_p);

  // logarithmic: log E vs log log(e+t)
  std::vector<double> llt(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    llt[i] = std::log(std::log(std::exp(1.0) + t[i]));
  const LineFit fl = linear_fit(llt, le);

  DecayReport rep;
  rep.window_lo = window_lo;
  rep.window_hi = window_hi;
  rep.rms_all = {fe.rms_residual, fp.rms_residual, fl.rms_residual};

  struct Cand {
    DecayModel model;
    double rms;
    double rate;
    double amp;
  };
  std::array<Cand, 3> cands = {{
      {DecayModel::exponential, fe.rms_residual, -fe.slope, std::exp(fe.intercept)},
      {DecayModel::polynomial, fp.rms_residual, -fp.slope, std::exp(fp.intercept)},
      {DecayModel::logarithmic, fl.rms_residual, -fl.slope, std::exp(fl.intercept)},
  }};
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.rms < b.rms; });

  const Cand& best = cands[0];
  rep.rms_residual = best.rms;
  rep.model_selection_margin = best.rms > 0.0 ? cands[1].rms / best.rms
                                              : std::numeric_limits<double>::infinity();
  rep.ambiguous = rep.model_selection_margin < 1.05;

  if (best.rate <= 0.0) {
    rep.model = DecayModel::flat;
    rep.rate = 0.0;
    rep.amplitude = best.amp;
  } else {
    rep.model = best.model;
    rep.rate = best.rate;
    rep.amplitude = best.amp;
  }
  return rep;
}

inline DecayReport fit_decay(const EnergyTrace& tr, double window_lo, double window_hi) {
  return fit_decay(tr.times, tr.energies, window_lo, window_hi);
}

// Default fit window drops the initial transient: [0.2 T, T].
inline DecayReport fit_decay(const EnergyTrace& tr) {
  const double T = tr.times.empty() ? 0.0 : tr.times.back();
  return fit_decay(tr, 0.2 * T, T);
}

inline double model_value(DecayModel m, double amplitude, double rate, double t) {
  switch (m) {
    case DecayModel::exponential: return amplitude * std::exp(-rate * t);
    case DecayModel::polynomial: return amplitude * std::pow(t, -rate);
    case DecayModel::logarithmic:
      return amplitude * std::pow(std::log(std::exp(1.0) + t), -rate);
    default: return amplitude;
  }
}

}  // namespace fracwave
