// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Time integration of U' = A_gamma U by Strang splitting with exact
// sub-flows.  The free flow is the unitary pair of w-branch multipliers
// exp(+-i dt Lam); the damping flow is the pointwise map u2 -> exp(-gamma dt) u2.
// Energy is conserved exactly for gamma = 0 and nonincreasing otherwise; the
// only discretization error is operator non-commutativity, of order dt^2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fracwave/damping.hpp"
#include "fracwave/field.hpp"
#include "fracwave/grid.hpp"
#include "fracwave/operators.hpp"

namespace fracwave {

struct TraceMeta {
  int dim = 0;
  std::size_t n = 0;
  double box_len = 0.0;
  double s = 0.0;
  std::string damping_family;
  double dt = 0.0;
  std::size_t steps_per_output = 0;
};

struct EnergyTrace {
  std::vector<double> times;     // uniform dt_out
  std::vector<double> energies;  // E(t) = 1/2 * energy_norm^2
  TraceMeta meta;
};

// dt resolving the fastest oscillation by >= 30 samples; the scheme itself is
// unconditionally stable.
inline double default_dt(const TorusGrid& grid, double s) {
  double mmax = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    mmax = std::max(mmax, frac_symbol_value_sq(grid.freq_sq(i), s, SymbolRole::half));
  return 0.2 / mmax;
}

// Energy fraction carried by Nyquist-index modes; accepted data requires
// < 1e-10 of the total, since the symbol is unresolved there.
inline double nyquist_energy_fraction(const StateVector& U) {
  const TorusGrid& g = U.u1.grid();
  double nyq = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = frac_symbol_value_sq(g.freq_sq(i), U.s, SymbolRole::half);
    const double e = w * w * std::norm(U.u1.spectrum()[i]) + std::norm(U.u2.spectrum()[i]);
    tot += e;
    if (g.is_nyquist(i)) nyq += e;
  }
  return tot > 0.0 ? nyq / tot : 0.0;
}

namespace detail {

// Hot-loop state: u1 kept spectral, u2 kept physical between damping steps.
class StrangStepper {
 public:
  StrangStepper(GridPtr grid, const std::vector<double>& gamma, double s, double dt)
      : grid_(std::move(grid)), dt_(dt) {
    const TorusGrid& g = *grid_;
    m_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      m_[i] = frac_symbol_value_sq(g.freq_sq(i), s, SymbolRole::half);
    phase_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      phase_[i] = cd(std::cos(dt * m_[i]), std::sin(dt * m_[i]));  // e^{+i dt m}
    bhalf_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) bhalf_[i] = std::exp(-gamma[i] * dt / 2.0);
  }

  void set_state(const StateVector& U) {
    u1_ = U.u1.spectrum();
    u2_phys_ = U.u2.values();
    u2_spec_ = U.u2.spectrum();
  }

  void step() {
    const std::size_t n = u1_.size();
    for (std::size_t i = 0; i < n; ++i) u2_phys_[i] *= bhalf_[i];
    u2_spec_ = u2_phys_;
    grid_->transform(u2_spec_.data(), /*inverse=*/false);
    for (std::size_t i = 0; i < n; ++i) {
      // w-branches w1 = m u1 - i u2, w2 = m u1 + i u2 advance by e^{+-i dt m}
      const cd iu2 = cd(-u2_spec_[i].imag(), u2_spec_[i].real());
      const cd w1 = (m_[i] * u1_[i] - iu2) * phase_[i];
      const cd w2 = (m_[i] * u1_[i] + iu2) * std::conj(phase_[i]);
      u1_[i] = (w1 + w2) / (2.0 * m_[i]);
      const cd d = w1 - w2;  // = -2i u2
      u2_spec_[i] = cd(-0.5 * d.imag(), 0.5 * d.real());  // i*d/2
    }
    u2_phys_ = u2_spec_;
    grid_->transform(u2_phys_.data(), /*inverse=*/true);
    for (std::size_t i = 0; i < n; ++i) u2_phys_[i] *= bhalf_[i];
  }

  double energy() const {
    cvec spec = u2_phys_;
    grid_->transform(spec.data(), /*inverse=*/false);
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i)
      acc += m_[i] * m_[i] * std::norm(u1_[i]) + std::norm(spec[i]);
    return 0.5 * acc * grid_->cell_measure();
  }

  StateVector state(double s) const {
    cvec u1 = u1_;
    cvec u2 = u2_phys_;
    return StateVector(SpectralField::from_spectrum(grid_, std::move(u1)),
                       SpectralField::from_values(grid_, std::move(u2)), s);
  }

  bool finite() const {
    for (const cd& v : u1_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    for (const cd& v : u2_phys_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

 private:
  GridPtr grid_;
  double dt_;
  std::vector<double> m_;
  std::vector<cd> phase_;
  std::vector<double> bhalf_;
  cvec u1_, u2_phys_, u2_spec_;
};

}  // namespace detail

// One Strang step (B half, A full, B half); second order in dt for the
// coupled flow.
inline StateVector step_strang(const StateVector& U, const DampingProfile& gamma, double dt) {
  if (!(dt > 0.0)) throw config_error("step_strang: dt must be > 0");
  if (gamma.grid->size() != U.u1.grid().size())
    throw config_error("step_strang: damping grid mismatch");
  detail::StrangStepper st(U.u1.grid_ptr(), gamma.gamma, U.s, dt);
  st.set_state(U);
  st.step();
  return st.state(U.s);
}

inline EnergyTrace simulate(const StateVector& U0, const DampingProfile& gamma, double T,
                            double dt, double dt_out) {
  if (!(T > 0.0)) throw config_error("simulate: horizon T must be > 0");
  if (!(dt_out > 0.0) || dt > dt_out) throw config_error("simulate: need 0 < dt <= dt_out");
  const GridPtr grid = U0.u1.grid_ptr();
  if (dt <= 0.0) dt = default_dt(*grid, U0.s);
  if (nyquist_energy_fraction(U0) >= 1e-10)
    throw config_error("simulate: initial data carries Nyquist energy above 1e-10 of total");

  const std::size_t per_out = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                           std::ceil(dt_out / dt - 1e-12)));
  const double dt_eff = dt_out / static_cast<double>(per_out);
  const std::size_t n_out = static_cast<std::size_t>(std::ceil(T / dt_out - 1e-12));

  detail::StrangStepper st(grid, gamma.gamma, U0.s, dt_eff);
  st.set_state(U0);

  EnergyTrace tr;
  tr.meta = {grid->dim(),       grid->points_per_axis(), grid->box_len(), U0.s,
             family_name(gamma.family), dt_eff,          per_out};
  tr.times.reserve(n_out + 1);
  tr.energies.reserve(n_out + 1);
  const double e0 = st.energy();
  if (!(e0 > 0.0)) throw config_error("simulate: initial energy must be positive");
  tr.times.push_back(0.0);
  tr.energies.push_back(e0);

  double prev = e0;
  for (std::size_t k = 1; k <= n_out; ++k) {
    for (std::size_t j = 0; j < per_out; ++j) st.step();
    if (!st.finite())
      throw numeric_error("simulate: non-finite state at step " +
                          std::to_string(k * per_out));
    const double e = st.energy();
    if (e > prev + 1e-12 * e0)
      throw numeric_error("simulate: energy increased at step " + std::to_string(k * per_out));
    tr.times.push_back(static_cast<double>(k) * dt_out);
    tr.energies.push_back(e);
    prev = e;
  }
  return tr;
}

// Data in the range of (I - A_0)^{-k}: the w-branches are scaled by
// (1 -+ i Lam)^{-k}, suppressing high frequencies by (1 + symbol)^{-k}.
inline StateVector smooth_data(const StateVector& U, int k) {
  if (k < 1) throw config_error("smooth_data: smoothing order k must be >= 1");
  const TorusGrid& g = U.u1.grid();
  const std::size_t n = g.size();
  cvec w1(n), w2(n);
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = frac_symbol_value_sq(g.freq_sq(i), U.s, SymbolRole::half);
    const cd iu2 = cd(0.0, 1.0) * U.u2.spectrum()[i];
    w1[i] = m[i] * U.u1.spectrum()[i] - iu2;
    w2[i] = m[i] * U.u1.spectrum()[i] + iu2;
    const cd f1 = std::pow(cd(1.0, -m[i]), -k);  // (1 - i m)^{-k}
    const cd f2 = std::pow(cd(1.0, +m[i]), -k);  // (1 + i m)^{-k}
    w1[i] *= f1;
    w2[i] *= f2;
  }
  cvec u1(n), u2(n);
  for (std::size_t i = 0; i < n; ++i) {
    u1[i] = (w1[i] + w2[i]) / (2.0 * m[i]);
    u2[i] = cd(0.0, 0.5) * (w1[i] - w2[i]);
  }
  return StateVector(SpectralField::from_spectrum(U.u1.grid_ptr(), std::move(u1)),
                     SpectralField::from_spectrum(U.u1.grid_ptr(), std::move(u2)), U.s);
}

// Broad-band random data: white noise in both components over
// |xi| <= band_frac * max axis frequency, Nyquist-free, normalized so the
// initial energy is 1/2 * norm^2 = 1/2.
inline StateVector make_broadband(GridPtr grid, double s, Rng& rng, double band_frac = 0.5) {
  SpectralField u1 = random_field(grid, rng, band_frac);
  SpectralField u2 = random_field(grid, rng, band_frac);
  StateVector U(std::move(u1), std::move(u2), s);
  const double e = energy_norm(U);
  return StateVector(U.u1.scaled(1.0 / e), U.u2.scaled(1.0 / e), s);
}

// Gaussian envelope times carrier, launched in a single w-branch so the
// packet propagates in one direction (group velocity d(symbol)/d xi).
inline StateVector make_wave_packet(GridPtr grid, double s, double center, double carrier,
                                    double width) {
  const TorusGrid& g = *grid;
  if (g.dim() != 1) throw config_error("make_wave_packet: 1-D only");
  std::vector<cd> vals(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double d = std::abs(g.coord(i)[0] - center);
    d = std::min(d, g.box_len() - d);
    vals[i] = std::exp(-d * d / (2.0 * width * width)) *
              cd(std::cos(carrier * g.coord(i)[0]), std::sin(carrier * g.coord(i)[0]));
  }
  SpectralField u1 = SpectralField::from_values(grid, std::move(vals));
  // zero w1-branch: u2 = -i Lam u1
  SpectralField u2 = apply_frac_symbol(u1, s, SymbolRole::half).scaled(cd(0.0, -1.0));
  // strip Nyquist content introduced by sampling
  auto strip = [&](const SpectralField& f) {
    cvec spec = f.spectrum();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.is_nyquist(i)) spec[i] = cd(0.0, 0.0);
    return SpectralField::from_spectrum(grid, std::move(spec));
  };
  StateVector U(strip(u1), strip(u2), s);
  const double e = energy_norm(U);
  if (!(e > 0.0)) throw config_error("make_wave_packet: degenerate packet");
  return StateVector(U.u1.scaled(1.0 / e), U.u2.scaled(1.0 / e), s);
}

inline StateVector make_single_mode(GridPtr grid, double s, std::size_t spectral_idx,
                                    cd amp_u1, cd amp_u2) {
  SpectralField mode = fourier_mode(grid, spectral_idx);
  return StateVector(mode.scaled(amp_u1), mode.scaled(amp_u2), s);
}

}  // namespace fracwave
