// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The fractional Klein-Gordon symbol (|xi|^2+1)^(s/2), its square root
// realization, and the spectral annulus/ball membership predicates used by
// the band projections.

#include <cmath>
#include <limits>

#include "fracwave/errors.hpp"

namespace fracwave {

enum class SymbolRole {
  full,  // (|xi|^2+1)^(s/2)
  half,  // (|xi|^2+1)^(s/4)
};

// Symbol value from |xi|^2.  >= 1 for every frequency and strictly
// increasing in |xi|.
inline double frac_symbol_value_sq(double xi_sq, double s, SymbolRole role) {
  if (!(s >= 1.0)) throw config_error("frac_symbol: order s must be >= 1");
  if (!(xi_sq >= 0.0) || !std::isfinite(xi_sq))
    throw numeric_error("frac_symbol: invalid |xi|^2");
  const double e = (role == SymbolRole::full) ? s / 2.0 : s / 4.0;
  return std::pow(xi_sq + 1.0, e);
}

inline double frac_symbol_value(double xi_abs, double s, SymbolRole role) {
  return frac_symbol_value_sq(xi_abs * xi_abs, s, role);
}

// Spectral annulus A_lam = { xi : | (|xi|^2+1)^(1/2) - lam^(1/s) | <= 1 }.
// Membership is closed-inclusive.  Every member has |xi| <= lam + 2 for s >= 1.
struct AnnulusSpec {
  double lam;
  double s;

  AnnulusSpec(double lambda, double order) : lam(lambda), s(order) {
    if (!(lam >= 0.0)) throw config_error("AnnulusSpec: lambda must be >= 0");
    if (!(s >= 1.0)) throw config_error("AnnulusSpec: order s must be >= 1");
  }

  double center() const { return lam == 0.0 ? 0.0 : std::pow(lam, 1.0 / s); }

  bool contains_sq(double xi_sq) const {
    return std::abs(std::sqrt(xi_sq + 1.0) - center()) <= 1.0;
  }
};

}  // namespace fracwave
