// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// The damped first-order system A_gamma(u1,u2) = (u2, -(\Delta+1... in symbol
// form) u1 - gamma u2) on the energy space H^{s/2} x L^2, its skew-adjoint
// free part A_0, the w-diagonalization, and matrix-free smallest-singular-
// value sweeps of (A_gamma - i*lambda) along the imaginary axis.
//
// Energy-space geometry is realized by the invertible half-symbol multiplier
// Lam = (|xi|^2+1)^(s/4): the stacked Fourier coordinates (Lam*u1_hat, u2_hat)
// carry the plain l2 inner product, so one eigensolver codepath serves every
// lab.  In w = (Lam u1 - i u2, Lam u1 + i u2) coordinates the free part is
// diagonal:
//
//   || (A_0 - i*lambda) U ||^2_E  =  1/2 ( ||(lambda-Lam) w1||^2 + ||(lambda+Lam) w2||^2 ).
//
// Note the factor 1/2, which the parallelogram identity
// ||w1||^2 + ||w2||^2 = 2 ||U||^2_E forces; tests pin it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fracwave/damping.hpp"
#include "fracwave/eigensolve.hpp"
#include "fracwave/field.hpp"
#include "fracwave/grid.hpp"
#include "fracwave/symbols.hpp"

namespace fracwave {

struct StateVector {
  SpectralField u1;  // position component, H^{s/2} class
  SpectralField u2;  // velocity component, L^2
  double s;          // operator order, >= 2 for the resolvent2 algebra

  StateVector(SpectralField pos, SpectralField vel, double order)
      : u1(std::move(pos)), u2(std::move(vel)), s(order) {
    if (u1.grid().size() != u2.grid().size() || u1.grid().dim() != u2.grid().dim())
      throw config_error("StateVector: components live on different grids");
    if (!(s >= 1.0)) throw config_error("StateVector: order s must be >= 1");
  }
};

inline double energy_norm(const StateVector& U) {
  const double a = hs_norm(U.u1, U.s);
  const double b = l2_norm(U.u2);
  return std::sqrt(a * a + b * b);
}

inline cd energy_inner(const StateVector& U, const StateVector& V) {
  const SpectralField lu = apply_frac_symbol(U.u1, U.s, SymbolRole::half);
  const SpectralField lv = apply_frac_symbol(V.u1, V.s, SymbolRole::half);
  return l2_inner(lu, lv) + l2_inner(U.u2, V.u2);
}

// A_gamma U = (u2, -(full symbol) u1 - gamma u2); pass nullptr for A_0.
inline StateVector apply_A(const StateVector& U, const DampingProfile* gamma) {
  if (!(U.s >= 2.0)) throw config_error("apply_A: requires order s >= 2");
  const SpectralField lu1 = apply_frac_symbol(U.u1, U.s, SymbolRole::full);
  std::vector<cd> v2(U.u2.values());
  if (gamma != nullptr) {
    if (gamma->grid->size() != U.u1.grid().size())
      throw config_error("apply_A: damping profile grid mismatch");
    for (std::size_t i = 0; i < v2.size(); ++i)
      v2[i] = -lu1.values()[i] - gamma->gamma[i] * v2[i];
  } else {
    for (std::size_t i = 0; i < v2.size(); ++i) v2[i] = -lu1.values()[i];
  }
  return StateVector(U.u2, SpectralField::from_values(U.u1.grid_ptr(), std::move(v2)), U.s);
}

struct WPair {
  SpectralField w1;
  SpectralField w2;
};

inline WPair w_transform(const StateVector& U) {
  const SpectralField lu1 = apply_frac_symbol(U.u1, U.s, SymbolRole::half);
  return {lu1 - U.u2.scaled(cd(0.0, 1.0)), lu1 + U.u2.scaled(cd(0.0, 1.0))};
}

inline StateVector w_inverse(const WPair& W, double s) {
  SpectralField sum = (W.w1 + W.w2).scaled(0.5);
  SpectralField u1 = apply_multiplier(sum, [s](double xi_sq) {
    return cd(1.0 / frac_symbol_value_sq(xi_sq, s, SymbolRole::half), 0.0);
  });
  SpectralField u2 = (W.w1 - W.w2).scaled(cd(0.0, 0.5));
  return StateVector(std::move(u1), std::move(u2), s);
}

// Exact resolvent norm of the free operator on the grid:
// 1 / min over lattice xi and signs of |lambda -+ (|xi|^2+1)^(s/4)|.
inline double free_resolvent_norm_exact(double lam, double s, const TorusGrid& grid) {
  double dmin = std::numeric_limits<double>::infinity();
  double at_mode = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double m = frac_symbol_value_sq(grid.freq_sq(i), s, SymbolRole::half);
    const double d = std::min(std::abs(lam - m), std::abs(lam + m));
    if (d < dmin) {
      dmin = d;
      at_mode = std::sqrt(grid.freq_sq(i));
    }
  }
  if (dmin <= 1e-14 * (1.0 + std::abs(lam)))
    throw pole_error("free resolvent requested at a lattice eigenvalue", at_mode);
  return 1.0 / dmin;
}

// (A_gamma - i*lambda) in stacked energy Fourier coordinates (Lam u1_hat, u2_hat).
class ResolventOperator {
 public:
  ResolventOperator(GridPtr grid, const std::vector<double>* gamma, double lam, double s)
      : grid_(std::move(grid)), gamma_(gamma), lam_(lam) {
    const TorusGrid& g = *grid_;
    m_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      m_[i] = frac_symbol_value_sq(g.freq_sq(i), s, SymbolRole::half);
    if (gamma_ != nullptr && gamma_->size() != g.size())
      throw config_error("ResolventOperator: damping sample count mismatch");
  }

  std::size_t dim() const { return 2 * grid_->size(); }

  double norm_bound() const {
    const double mmax = *std::max_element(m_.begin(), m_.end());
    double gmax = 0.0;
    if (gamma_ != nullptr)
      gmax = *std::max_element(gamma_->begin(), gamma_->end());
    const double a = std::abs(lam_) + mmax;
    const double b = mmax + gmax + std::abs(lam_);
    return a * a + b * b;  // dominates ||T||^2 = ||T* T||
  }

  // out = T in
  void apply(const cvec& in, cvec& out) const { apply_impl(in, out, false); }
  // out = T* in
  void apply_adjoint(const cvec& in, cvec& out) const { apply_impl(in, out, true); }

  // out = T* T in
  void apply_normal(const cvec& in, cvec& out) const {
    scratch_.resize(dim());
    apply(in, scratch_);
    apply_adjoint(scratch_, out);
  }

 private:
  void apply_impl(const cvec& in, cvec& out, bool adjoint) const {
    const std::size_t n = grid_->size();
    out.resize(2 * n);
    const cd ilam = adjoint ? cd(0.0, lam_) : cd(0.0, -lam_);
    const double msign = adjoint ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = ilam * in[i] - msign * m_[i] * in[n + i];
      out[n + i] = msign * m_[i] * in[i] + ilam * in[n + i];
    }
    if (gamma_ != nullptr) {
      damp_.assign(in.begin() + n, in.end());
      grid_->transform(damp_.data(), /*inverse=*/true);
      for (std::size_t i = 0; i < n; ++i) damp_[i] *= (*gamma_)[i];
      grid_->transform(damp_.data(), /*inverse=*/false);
      for (std::size_t i = 0; i < n; ++i) out[n + i] -= damp_[i];
    }
  }

  GridPtr grid_;
  const std::vector<double>* gamma_;
  double lam_;
  std::vector<double> m_;
  mutable cvec scratch_;
  mutable cvec damp_;
};

struct SigmaMinResult {
  double sigma = 0.0;
  double residual = 0.0;  // eigen-residual of the normal operator
  long matvecs = 0;
};

// Smallest singular value of (A_gamma - i*lambda I) in the energy inner
// product, residual-certified at tol.
inline SigmaMinResult resolvent_sigma_min(GridPtr grid, const DampingProfile* gamma, double lam,
                                          double s, double tol = 1e-9,
                                          const cvec* warm_start = nullptr,
                                          std::uint64_t seed = 0x51eeULL) {
  if (!(tol > 0.0)) throw config_error("resolvent_sigma_min: tol must be > 0");
  if (!(s >= 2.0)) throw config_error("resolvent_sigma_min: requires order s >= 2");
  ResolventOperator op(grid, gamma != nullptr ? &gamma->gamma : nullptr, lam, s);
  EigOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  opts.start = warm_start;
  EigResult r = smallest_eigenvalue(
      [&op](const cvec& in, cvec& out) { op.apply_normal(in, out); }, op.dim(), op.norm_bound(),
      opts);
  if (!r.converged)
    throw convergence_error("resolvent_sigma_min: eigen-iteration did not certify", r.residual);
  const double sigma = std::sqrt(std::max(r.value, 0.0));
  // singular pencil: sigma at noise level, or an eigenvalue the certificate
  // cannot distinguish from zero
  if (sigma < 1e-13 || r.value <= r.residual)
    throw pole_error("resolvent_sigma_min: singular pencil (lambda in the discrete spectrum)",
                     lam);
  return {sigma, r.residual, r.matvecs};
}

// Keeps the minimizing vector available for warm-started sweeps.
inline SigmaMinResult resolvent_sigma_min_vec(GridPtr grid, const DampingProfile* gamma,
                                              double lam, double s, double tol, cvec& io_vec,
                                              std::uint64_t seed) {
  ResolventOperator op(grid, gamma != nullptr ? &gamma->gamma : nullptr, lam, s);
  EigOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  if (!io_vec.empty()) opts.start = &io_vec;
  EigResult r = smallest_eigenvalue(
      [&op](const cvec& in, cvec& out) { op.apply_normal(in, out); }, op.dim(), op.norm_bound(),
      opts);
  if (!r.converged)
    throw convergence_error("resolvent_sigma_min: eigen-iteration did not certify", r.residual);
  io_vec = std::move(r.vector);
  const double sigma = std::sqrt(std::max(r.value, 0.0));
  // singular pencil: sigma at noise level, or an eigenvalue the certificate
  // cannot distinguish from zero
  if (sigma < 1e-13 || r.value <= r.residual)
    throw pole_error("resolvent_sigma_min: singular pencil (lambda in the discrete spectrum)",
                     lam);
  return {sigma, r.residual, r.matvecs};
}

// ---------------------------------------------------------------------------
// Inequality chain of the second resolvent estimate, evaluated with measured
// constants.  (c, C) must come from an observability envelope at order s/2,
// i.e. c*exp(-C*l) <= ||(Lam - l) f||^2 + ||f||^2_Omega for unit f, l = |lambda|.
// For lambda < 0 the roles of w1 and w2 swap.

struct ChainStep {
  const char* name;
  double lhs;
  double rhs;
  double slack;  // rhs - lhs
  bool ok;
};

struct ChainReport {
  std::array<ChainStep, 4> steps;
  bool all_ok = true;
  double scale = 0.0;
};

inline ChainReport check_resolvent2_chain(const StateVector& U, double lam,
                                          const std::vector<std::uint8_t>& omega, double c,
                                          double C) {
  if (!(U.s >= 2.0)) throw config_error("check_resolvent2_chain: requires order s >= 2");
  const double al = std::abs(lam);
  const double decay = c * std::exp(-C * al);
  const WPair W = w_transform(U);
  const SpectralField& wa = (lam >= 0.0) ? W.w1 : W.w2;
  const SpectralField& wb = (lam >= 0.0) ? W.w2 : W.w1;

  auto shifted = [&](const SpectralField& f, double sign) {
    return apply_multiplier(f, [&](double xi_sq) {
      return cd(frac_symbol_value_sq(xi_sq, U.s / 2.0, SymbolRole::full) + sign * al, 0.0);
    });
  };
  const double a1 = std::pow(l2_norm(shifted(wa, -1.0)), 2);   // ||(Lam-|l|) wa||^2
  const double b3 = std::pow(l2_norm(shifted(wb, +1.0)), 2);   // ||(Lam+|l|) wb||^2
  const double oa = std::pow(l2_norm_on(wa, omega), 2);
  const double ob = std::pow(l2_norm_on(wa - wb, omega), 2);   // = 4 ||u2||^2_Omega
  const double u2o = std::pow(l2_norm_on(U.u2, omega), 2);
  const double b2 = std::pow(l2_norm(wb), 2);
  const double e2 = std::pow(energy_norm(U), 2);

  const StateVector AU = apply_A(U, nullptr);
  const StateVector RU(AU.u1 - U.u1.scaled(cd(0.0, lam)), AU.u2 - U.u2.scaled(cd(0.0, lam)),
                       U.s);
  const double r2 = std::pow(energy_norm(RU), 2);

  const double e0 = 2.0 * decay * e2;
  const double s1 = a1 + oa + decay * b2;
  const double s2 = a1 + 2.0 * ob + (2.0 + decay) * b2;
  const double s3 = a1 + (2.0 + decay) * b3 + 8.0 * u2o;
  const double s4 = 2.0 * (2.0 + decay) * r2 + 8.0 * u2o;

  ChainReport rep;
  rep.scale = std::max({e0, s4, 1e-30});
  const double tol = 1e-10 * rep.scale;
  const double lhs[4] = {e0, s1, s2, s3};
  const double rhs[4] = {s1, s2, s3, s4};
  const char* names[4] = {"observability-at-order-s/2", "split-w1-into-w1-w2",
                          "offband-absorption", "free-resolvent-identity"};
  for (int i = 0; i < 4; ++i) {
    rep.steps[i] = {names[i], lhs[i], rhs[i], rhs[i] - lhs[i], rhs[i] - lhs[i] >= -tol};
    rep.all_ok = rep.all_ok && rep.steps[i].ok;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Damping absorption: turn an observability envelope for the free system
// into a predicted resolvent envelope for A_gamma via the D-delta
// Cauchy-Schwarz step, with D = 2 + eps^-2 and delta = c0 exp(-C0|l|)/2.

struct AbsorbEstimate {
  double c0 = 0.0, C0 = 0.0;          // derived free-system constants
  double c_pred = 0.0, C_pred = 0.0;  // asymptotic envelope for sigma_min^2
  std::vector<double> predicted_sigma;
  int violations = 0;  // sweep points where the prediction exceeds measurement
};

// pred(l) <= sigma_min(A_gamma - i l)^2 pointwise.
inline double absorb_predicted_sq(double lam, double c0, double C0, double D, double gamma_sup) {
  const double al = std::abs(lam);
  const double num = 0.5 * c0 * std::exp(-C0 * al);
  const double den = 2.0 + 2.0 * D * D * gamma_sup * gamma_sup * std::exp(C0 * al) / c0;
  return num / den;
}

inline AbsorbEstimate absorb_damping_estimate(const DampingProfile& gamma, double eps,
                                              const ThickCertificate& cert, double c_u,
                                              double C_u, const std::vector<double>& lams,
                                              const std::vector<double>& sigma_measured) {
  if (!cert.thick)
    throw config_error("absorb_damping_estimate: level set is not certified thick");
  if (!(c_u > 0.0) || !(C_u >= 0.0))
    throw config_error("absorb_damping_estimate: invalid envelope constants");
  AbsorbEstimate est;
  // chain constants: 2 c_u e^{-C_u l} ||U||^2 <= K ( ||(A0-il)U||^2 + ||u2||^2_Omega )
  const double K = std::max(2.0 * (2.0 + c_u), 8.0);
  est.c0 = 2.0 * c_u / K;
  est.C0 = C_u;
  const double D = 2.0 + 1.0 / (eps * eps);
  est.c_pred = 0.5 * est.c0 / (2.0 + 2.0 * D * D * gamma.sup_norm * gamma.sup_norm / est.c0);
  est.C_pred = 2.0 * est.C0;
  est.predicted_sigma.resize(lams.size());
  for (std::size_t i = 0; i < lams.size(); ++i) {
    est.predicted_sigma[i] =
        std::sqrt(absorb_predicted_sq(lams[i], est.c0, est.C0, D, gamma.sup_norm));
    if (i < sigma_measured.size() &&
        est.predicted_sigma[i] > sigma_measured[i] * (1.0 + 1e-9))
      ++est.violations;
  }
  return est;
}

}  // namespace fracwave
