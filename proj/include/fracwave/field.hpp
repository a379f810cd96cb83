// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Complex scalar fields on a torus grid carrying both the sample values and
// the unitary Fourier coefficients.  Fields are immutable after construction;
// every operation returns a new field, so sharing across threads is safe.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "fracwave/errors.hpp"
#include "fracwave/grid.hpp"
#include "fracwave/rng.hpp"
#include "fracwave/symbols.hpp"

namespace fracwave {

class SpectralField {
 public:
  static SpectralField from_values(GridPtr grid, std::vector<cd> values) {
    check_size(*grid, values.size());
    std::vector<cd> spec = values;
    grid->transform(spec.data(), /*inverse=*/false);
    return SpectralField(std::move(grid), std::move(values), std::move(spec));
  }

  static SpectralField from_spectrum(GridPtr grid, std::vector<cd> spectrum) {
    check_size(*grid, spectrum.size());
    std::vector<cd> vals = spectrum;
    grid->transform(vals.data(), /*inverse=*/true);
    return SpectralField(std::move(grid), std::move(vals), std::move(spectrum));
  }

  static SpectralField zero(GridPtr grid) {
    std::vector<cd> z(grid->size(), cd(0.0, 0.0));
    return SpectralField(std::move(grid), z, z);
  }

  const TorusGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  const std::vector<cd>& values() const { return values_; }
  const std::vector<cd>& spectrum() const { return spectrum_; }

  SpectralField operator+(const SpectralField& o) const { return combine(o, 1.0); }
  SpectralField operator-(const SpectralField& o) const { return combine(o, -1.0); }

  SpectralField scaled(cd a) const {
    std::vector<cd> v(values_), s(spectrum_);
    for (auto& x : v) x *= a;
    for (auto& x : s) x *= a;
    return SpectralField(grid_, std::move(v), std::move(s));
  }

 private:
  SpectralField(GridPtr grid, std::vector<cd> values, std::vector<cd> spectrum)
      : grid_(std::move(grid)), values_(std::move(values)), spectrum_(std::move(spectrum)) {}

  static void check_size(const TorusGrid& g, std::size_t n) {
    if (n != g.size()) throw config_error("SpectralField: sample count does not match grid");
  }

  SpectralField combine(const SpectralField& o, double sign) const {
    if (grid_.get() != o.grid_.get() && (grid_->dim() != o.grid_->dim() ||
                                         grid_->points_per_axis() != o.grid_->points_per_axis() ||
                                         grid_->box_len() != o.grid_->box_len()))
      throw config_error("SpectralField: grid mismatch");
    std::vector<cd> v(values_), s(spectrum_);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] += sign * o.values_[i];
      s[i] += sign * o.spectrum_[i];
    }
    return SpectralField(grid_, std::move(v), std::move(s));
  }

  GridPtr grid_;
  std::vector<cd> values_;
  std::vector<cd> spectrum_;

  template <class M>
  friend SpectralField apply_multiplier(const SpectralField& f, M&& m);
};

// Apply a Fourier multiplier m(|xi|^2) -> complex.  Linear, and commutes with
// any other multiplier to roundoff.
template <class M>
SpectralField apply_multiplier(const SpectralField& f, M&& m) {
  const TorusGrid& g = f.grid();
  std::vector<cd> spec(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cd mv = m(g.freq_sq(i));
    if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
      throw numeric_error("apply_multiplier: non-finite symbol value at a lattice frequency");
    spec[i] = mv * f.spectrum()[i];
  }
  std::vector<cd> vals = spec;
  g.transform(vals.data(), /*inverse=*/true);
  return SpectralField(f.grid_ptr(), std::move(vals), std::move(spec));
}

inline SpectralField apply_frac_symbol(const SpectralField& f, double s, SymbolRole role) {
  return apply_multiplier(f, [s, role](double xi_sq) {
    return cd(frac_symbol_value_sq(xi_sq, s, role), 0.0);
  });
}

// P_lam: orthogonal projection onto the spectral annulus A_lam.
inline SpectralField project_annulus(const SpectralField& f, double lam, double s) {
  const AnnulusSpec a(lam, s);
  return apply_multiplier(f, [&a](double xi_sq) { return cd(a.contains_sq(xi_sq) ? 1.0 : 0.0, 0.0); });
}

// Orthogonal projection onto lattice frequencies with |xi| <= radius (closed).
inline SpectralField project_ball(const SpectralField& f, double radius) {
  if (!(radius >= 0.0)) throw config_error("project_ball: radius must be >= 0");
  const double r_sq = radius * radius;
  return apply_multiplier(f, [r_sq](double xi_sq) { return cd(xi_sq <= r_sq ? 1.0 : 0.0, 0.0); });
}

// Quadrature L2 norm, sqrt(h^d * sum |f|^2).
inline double l2_norm(const SpectralField& f) {
  double acc = 0.0;
  for (const cd& v : f.values()) acc += std::norm(v);
  return std::sqrt(acc * f.grid().cell_measure());
}

// H^{s/2} norm realized exactly as the L2 norm of the half-symbol multiplier.
inline double hs_norm(const SpectralField& f, double s) {
  const TorusGrid& g = f.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = frac_symbol_value_sq(g.freq_sq(i), s, SymbolRole::half);
    acc += w * w * std::norm(f.spectrum()[i]);
  }
  return std::sqrt(acc * g.cell_measure());
}

// <f, g> = h^d * sum f * conj(g); linear in the first argument.
inline cd l2_inner(const SpectralField& f, const SpectralField& g) {
  cd acc(0.0, 0.0);
  for (std::size_t i = 0; i < f.values().size(); ++i)
    acc += f.values()[i] * std::conj(g.values()[i]);
  return acc * f.grid().cell_measure();
}

// Restricted L2 norm over a physical-space mask, sqrt(h^d * sum_mask |f|^2).
inline double l2_norm_on(const SpectralField& f, const std::vector<std::uint8_t>& mask) {
  if (mask.size() != f.values().size())
    throw config_error("l2_norm_on: mask size does not match grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) acc += std::norm(f.values()[i]);
  return std::sqrt(acc * f.grid().cell_measure());
}

// Single Fourier mode e^{i xi_k . x}, identified by flat spectral index.
inline SpectralField fourier_mode(GridPtr grid, std::size_t spectral_idx) {
  std::vector<cd> spec(grid->size(), cd(0.0, 0.0));
  spec[spectral_idx] = cd(std::sqrt(static_cast<double>(grid->size())), 0.0);
  return SpectralField::from_spectrum(std::move(grid), std::move(spec));
}

// Complex white noise in frequency space with the Nyquist modes zeroed,
// normalized to unit L2 norm.  band_frac limits support to
// |xi| <= band_frac * max axis frequency.
inline SpectralField random_field(GridPtr grid, Rng& rng, double band_frac = 1.0) {
  const TorusGrid& g = *grid;
  std::vector<cd> spec(g.size());
  const double r_max = band_frac * g.max_axis_freq();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool keep = !g.is_nyquist(i) && g.freq_sq(i) <= r_max * r_max;
    spec[i] = keep ? rng.normal_complex() : cd(0.0, 0.0);
  }
  double acc = 0.0;
  for (const cd& v : spec) acc += std::norm(v);
  const double nrm = std::sqrt(acc * g.cell_measure());
  if (nrm > 0.0)
    for (cd& v : spec) v /= nrm;
  return SpectralField::from_spectrum(std::move(grid), std::move(spec));
}

}  // namespace fracwave
