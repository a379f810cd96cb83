// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Matrix-free smallest-eigenvalue solver for Hermitian positive semidefinite
// operators.  Strategy: shifted power iteration on (sigma*I - A) until the
// residual stalls, then thick-restart Lanczos with full reorthogonalization.
// Every returned pair is certified by an explicitly recomputed residual
// ||A v - mu v|| with ||v|| = 1.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "fracwave/errors.hpp"
#include "fracwave/rng.hpp"
#include "fracwave/types.hpp"

namespace fracwave {

inline cd vdot(const cvec& a, const cvec& b) {  // sum a_i * conj(b_i)
  cd acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return acc;
}

inline double vnorm(const cvec& a) {
  double acc = 0.0;
  for (const cd& x : a) acc += std::norm(x);
  return std::sqrt(acc);
}

inline void vaxpy(cd alpha, const cvec& x, cvec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void vscale(cvec& x, double a) {
  for (cd& v : x) v *= a;
}

struct EigOptions {
  double tol = 1e-9;              // absolute residual target (vectors normalized)
  long max_matvecs = 400000;
  int power_iters = 200;          // cap on the shifted-power phase
  int stall_window = 50;          // power phase stalls when the residual improves
  double stall_factor = 1e-3;     // by less than this factor over the window
  int basis = 120;                // Lanczos vectors per restart cycle
  int keep = 24;                  // Ritz pairs carried across a restart
  std::uint64_t seed = 0x5eedULL;
  const cvec* start = nullptr;    // optional warm start (copied)
};

struct EigResult {
  double value = 0.0;
  cvec vector;
  double residual = 0.0;
  long matvecs = 0;
  bool converged = false;
};

namespace detail {

inline cvec random_start(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  cvec v(dim);
  for (auto& x : v) x = rng.normal_complex();
  const double nn = vnorm(v);
  cvec out = std::move(v);
  for (auto& x : out) x /= nn;
  return out;
}

}  // namespace detail

// apply must implement void(const cvec& in, cvec& out) for a Hermitian PSD
// operator of the given dimension; upper_bound must dominate its spectrum.
template <class Op>
EigResult smallest_eigenvalue(Op&& apply, std::size_t dim, double upper_bound,
                              const EigOptions& opts = {}) {
  using Vec = Eigen::VectorXcd;
  using Mat = Eigen::MatrixXcd;
  if (dim == 0) throw config_error("smallest_eigenvalue: empty operator");

  EigResult res;
  cvec vin(dim), vout(dim);
  auto matvec = [&](const Vec& in, Vec& out) {
    Eigen::Map<Vec>(vin.data(), dim) = in;
    apply(vin, vout);
    out = Eigen::Map<const Vec>(vout.data(), dim);
    ++res.matvecs;
  };

  Vec v(dim);
  if (opts.start != nullptr && opts.start->size() == dim) {
    v = Eigen::Map<const Vec>(opts.start->data(), dim);
    // blend a little seeded noise so a stale warm start cannot hide the
    // bottom eigenvector
    const cvec noise = detail::random_start(dim, opts.seed);
    v += 1e-3 * v.norm() * Eigen::Map<const Vec>(noise.data(), dim);
    v /= v.norm();
  } else {
    const cvec r0 = detail::random_start(dim, opts.seed);
    v = Eigen::Map<const Vec>(r0.data(), dim);
  }

  const double sigma = 1.000001 * upper_bound + 1.0;
  Vec av(dim), work(dim);

  // --- phase 1: shifted power iteration on (sigma*I - A) ---
  double rq = 0.0, resid = std::numeric_limits<double>::infinity();
  std::vector<double> hist;
  for (int it = 0; it < opts.power_iters && res.matvecs < opts.max_matvecs; ++it) {
    matvec(v, av);
    rq = std::real(av.dot(v));
    work = av - rq * v;
    resid = work.norm();
    hist.push_back(resid);
    if (resid <= opts.tol) {
      res.value = rq;
      res.vector.assign(v.data(), v.data() + dim);
      res.residual = resid;
      res.converged = true;
      return res;
    }
    if (hist.size() > static_cast<std::size_t>(opts.stall_window)) {
      const double past = hist[hist.size() - 1 - opts.stall_window];
      if (past - resid < opts.stall_factor * past) break;  // gap too small, go Krylov
    }
    v = sigma * v - av;
    v /= v.norm();
  }

  // --- phase 2: thick-restart Lanczos (full reorthogonalization) ---
  const int m = static_cast<int>(std::min<std::size_t>(opts.basis, dim));
  const int keep = std::min(opts.keep, std::max(1, m - 2));
  Mat V(dim, m);
  V.col(0) = v;
  Mat H = Mat::Zero(m, m);
  int cur = 1;     // vectors in the basis
  int filled = 0;  // columns of H completed
  Rng fresh(opts.seed ^ 0xabcdef12345ULL);

  Eigen::SelfAdjointEigenSolver<Mat> es;
  double best_val = rq;
  Vec best_vec = v;
  double best_resid = resid;
  Vec w(dim), x(dim);

  while (res.matvecs < opts.max_matvecs) {
    bool exhausted = false;
    double beta = 0.0;

    // extend the basis up to m vectors
    while (cur <= m && filled < cur && !exhausted) {
      matvec(V.col(filled), w);
      const double wn0 = w.norm();
      Eigen::VectorXcd h = V.leftCols(cur).adjoint() * w;
      w.noalias() -= V.leftCols(cur) * h;
      if (w.norm() < 0.7 * wn0) {  // DGKS: reorthogonalize once more
        const Eigen::VectorXcd h2 = V.leftCols(cur).adjoint() * w;
        w.noalias() -= V.leftCols(cur) * h2;
        h += h2;
      }
      H.col(filled).head(cur) = h;
      for (int i = 0; i < filled; ++i) H(filled, i) = std::conj(H(i, filled));
      H(filled, filled) = cd(std::real(H(filled, filled)), 0.0);
      ++filled;
      beta = w.norm();
      if (beta <= 1e-13 * std::max(1.0, wn0)) {
        exhausted = true;
        break;
      }
      if (cur < m) {
        V.col(cur) = w / beta;
        H(cur, filled - 1) = cd(beta, 0.0);
        H(filled - 1, cur) = cd(beta, 0.0);
      }
      ++cur;
    }

    const int k = filled;
    es.compute(H.topLeftCorner(k, k));
    const auto& theta = es.eigenvalues();
    const auto& Y = es.eigenvectors();

    // explicit Ritz vector and residual for the lowest Ritz value
    x.noalias() = V.leftCols(k) * Y.col(0);
    x /= x.norm();
    matvec(x, av);
    const double mu = std::real(av.dot(x));
    work = av - mu * x;
    const double rx = work.norm();
    if (rx < best_resid) {
      best_resid = rx;
      best_val = mu;
      best_vec = x;
    }
    if (rx <= opts.tol) {
      res.value = mu;
      res.vector.assign(x.data(), x.data() + dim);
      res.residual = rx;
      res.converged = true;
      return res;
    }

    if (exhausted && k >= static_cast<int>(dim)) {
      // whole space spanned; the Rayleigh-Ritz value is exact up to roundoff
      break;
    }

    // thick restart: keep the lowest Ritz vectors plus the remainder direction
    const int nk = std::min(keep, k - 1);
    Mat W(dim, nk + 1);
    W.leftCols(nk).noalias() = V.leftCols(k) * Y.leftCols(nk);
    if (!exhausted && beta > 0.0) {
      W.col(nk) = w / beta;
    } else {
      // invariant subspace hit before convergence: continue in a fresh
      // direction orthogonal to everything kept
      const cvec r0 = detail::random_start(dim, fresh.next_u64());
      Vec f = Eigen::Map<const Vec>(r0.data(), dim);
      for (int pass = 0; pass < 2; ++pass)
        f -= W.leftCols(nk) * (W.leftCols(nk).adjoint() * f).eval();
      W.col(nk) = f / f.norm();
    }

    // The projected matrix restarts as diag(theta) on the kept Ritz vectors;
    // the coupling column is recomputed by the next extension step, which
    // reorthogonalizes A*vnext against the whole retained basis.
    H.setZero();
    for (int j = 0; j < nk; ++j) H(j, j) = cd(theta(j), 0.0);
    V.leftCols(nk + 1) = W;
    cur = nk + 1;
    filled = nk;
  }

  res.value = best_val;
  res.vector.assign(best_vec.data(), best_vec.data() + dim);
  res.residual = best_resid;
  res.converged = best_resid <= opts.tol;
  return res;
}

}  // namespace fracwave
