// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Numerical spectral estimates on the grid: the off-annulus symbol gap, sharp
// band-limited restriction constants over a physical-space set, and smallest
// eigenvalues of the observability quadratic form
//   Q_lam = ((|xi|^2+1)^(s/2) - lam)^2 + chi_Omega.
// Everything is matrix-free; transforms are the only dense operation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fracwave/eigensolve.hpp"
#include "fracwave/errors.hpp"
#include "fracwave/fitting.hpp"
#include "fracwave/grid.hpp"
#include "fracwave/symbols.hpp"

namespace fracwave {

// Smallest distance from lam to the full symbol over lattice frequencies
// outside the annulus A_lam; +inf when every lattice frequency is inside.
// This is the best discrete constant sqrt(c) in the off-annulus gap bound.
inline double offband_gap(double lam, double s, const TorusGrid& grid) {
  const AnnulusSpec ann(lam, s);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xi_sq = grid.freq_sq(i);
    if (ann.contains_sq(xi_sq)) continue;
    gap = std::min(gap, std::abs(frac_symbol_value_sq(xi_sq, s, SymbolRole::full) - lam));
  }
  return gap;
}

inline double mask_measure_fraction(const TorusGrid& grid, const std::vector<std::uint8_t>& m) {
  std::size_t cnt = 0;
  for (auto v : m) cnt += v != 0;
  return static_cast<double>(cnt) / static_cast<double>(grid.size());
}

struct SpectralConstantResult {
  double constant = 0.0;   // sup ||f|| / ||f||_Omega over the band-limited space
  double lambda_min = 0.0; // smallest eigenvalue of P_R chi_Omega P_R on the band
  long iterations = 0;
  double residual = 0.0;
  std::size_t band_dim = 0;
};

// Sharp restriction constant C(Omega, R) = lambda_min(P_R M_Omega P_R)^(-1/2)
// on the discrete band |xi| <= R.  The iteration is confined to the band by
// re-projecting every step, which keeps the operator PSD on the right
// subspace.
inline SpectralConstantResult spectral_constant(GridPtr grid,
                                                const std::vector<std::uint8_t>& omega, double R,
                                                double tol = 1e-11,
                                                std::uint64_t seed = 0xc0417ULL) {
  const TorusGrid& g = *grid;
  if (omega.size() != g.size()) throw config_error("spectral_constant: mask size mismatch");
  if (!(R >= 0.0)) throw config_error("spectral_constant: radius must be >= 0");
  if (mask_measure_fraction(g, omega) <= 0.0)
    throw config_error("spectral_constant: Omega must have positive measure");

  // Iteration runs in compacted band coordinates, so the null space outside
  // range(P_R) never enters; the action scatters to the full lattice, applies
  // the restriction in physical space, and gathers back.
  std::vector<std::size_t> band;
  const double r_sq = R * R;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.freq_sq(i) <= r_sq) band.push_back(i);
  const std::size_t band_dim = band.size();

  cvec spec(g.size());
  auto apply = [&](const cvec& in, cvec& out) {
    std::fill(spec.begin(), spec.end(), cd(0.0, 0.0));
    for (std::size_t k = 0; k < band_dim; ++k) spec[band[k]] = in[k];
    g.transform(spec.data(), /*inverse=*/true);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!omega[i]) spec[i] = cd(0.0, 0.0);
    g.transform(spec.data(), /*inverse=*/false);
    out.resize(band_dim);
    for (std::size_t k = 0; k < band_dim; ++k) out[k] = spec[band[k]];
  };

  EigOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  opts.basis = static_cast<int>(std::min<std::size_t>(160, band_dim));
  EigResult r = smallest_eigenvalue(apply, band_dim, 1.0, opts);
  if (!r.converged)
    throw convergence_error("spectral_constant: eigen-iteration did not certify", r.residual);

  SpectralConstantResult out;
  // an eigenvalue this small is numerically indistinguishable from zero;
  // clamp so the constant stays finite
  out.lambda_min = std::max(r.value, 1e-16);
  out.constant = 1.0 / std::sqrt(out.lambda_min);
  out.iterations = r.matvecs;
  out.residual = r.residual;
  out.band_dim = band_dim;
  return out;
}

struct QuadFormResult {
  double mu_min = 0.0;
  double residual = 0.0;
  long matvecs = 0;
};

// Smallest eigenvalue of Q_lam = (full symbol - lam)^2 + chi_Omega,
// residual-certified.  When io_vec is nonempty it warm-starts the iteration
// and receives the minimizer on return.
inline QuadFormResult quadform_min_eig_vec(GridPtr grid, const std::vector<std::uint8_t>& omega,
                                           double s, double lam, double tol, cvec& io_vec,
                                           std::uint64_t seed) {
  const TorusGrid& g = *grid;
  if (omega.size() != g.size()) throw config_error("quadform_min_eig: mask size mismatch");
  if (!(s >= 1.0)) throw config_error("quadform_min_eig: order s must be >= 1");
  if (!(lam >= 0.0)) throw config_error("quadform_min_eig: lambda must be >= 0");
  if (!(tol > 0.0)) throw config_error("quadform_min_eig: tol must be > 0");

  std::vector<double> wsq(g.size());
  double wmax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = frac_symbol_value_sq(g.freq_sq(i), s, SymbolRole::full) - lam;
    wsq[i] = d * d;
    wmax = std::max(wmax, wsq[i]);
  }

  cvec phys;
  auto apply = [&](const cvec& in, cvec& out) {
    phys = in;
    g.transform(phys.data(), /*inverse=*/true);
    for (std::size_t i = 0; i < phys.size(); ++i)
      if (!omega[i]) phys[i] = cd(0.0, 0.0);
    g.transform(phys.data(), /*inverse=*/false);
    out.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = wsq[i] * in[i] + phys[i];
  };

  EigOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  if (!io_vec.empty()) opts.start = &io_vec;
  EigResult r = smallest_eigenvalue(apply, g.size(), wmax + 1.0, opts);
  if (!r.converged)
    throw convergence_error("quadform_min_eig: eigen-iteration did not certify", r.residual);
  io_vec = std::move(r.vector);
  return {r.value, r.residual, r.matvecs};
}

inline QuadFormResult quadform_min_eig(GridPtr grid, const std::vector<std::uint8_t>& omega,
                                       double s, double lam, double tol = 1e-8,
                                       std::uint64_t seed = 0x9a11ULL) {
  cvec none;
  return quadform_min_eig_vec(std::move(grid), omega, s, lam, tol, none, seed);
}

}  // namespace fracwave
