// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Sweep drivers.  Points are grouped into fixed-size chunks; within a chunk
// the eigen-iterations warm-start from the previous minimizer, and chunks run
// in parallel.  Chunking is independent of the thread count, so results do
// not depend on --threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fracwave/fitting.hpp"
#include "fracwave/operators.hpp"
#include "fracwave/parallel.hpp"
#include "fracwave/uncertainty.hpp"

namespace fracwave {

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

constexpr std::size_t kSweepChunk = 8;

struct ResolventSweepRow {
  double lam = 0.0;
  double sigma = 0.0;
  double residual = 0.0;
  long matvecs = 0;
};

struct ResolventSweep {
  std::vector<ResolventSweepRow> rows;   // sorted by lambda
  EnvelopeFit envelope;                  // c*exp(-C|l|) <= sigma^2
};

inline ResolventSweep run_resolvent_sweep(GridPtr grid, const DampingProfile* gamma, double s,
                                          std::vector<double> lambdas, double tol, int threads,
                                          std::uint64_t seed, int refine_rounds = 1) {
  std::sort(lambdas.begin(), lambdas.end());
  ResolventSweep sweep;

  auto run_points = [&](const std::vector<double>& pts) {
    std::vector<ResolventSweepRow> rows(pts.size());
    const std::size_t nchunks = (pts.size() + kSweepChunk - 1) / kSweepChunk;
    parallel_for(nchunks, threads, [&](std::size_t c) {
      cvec warm;
      const std::size_t lo = c * kSweepChunk;
      const std::size_t hi = std::min(pts.size(), lo + kSweepChunk);
      for (std::size_t i = lo; i < hi; ++i) {
        const SigmaMinResult r = resolvent_sigma_min_vec(grid, gamma, pts[i], s, tol, warm,
                                                         seed ^ (0x9e37ULL * (c + 1)));
        rows[i] = {pts[i], r.sigma, r.residual, r.matvecs};
      }
    });
    return rows;
  };

  sweep.rows = run_points(lambdas);

  // geometric refinement around sigma_min dips
  for (int round = 0; round < refine_rounds; ++round) {
    std::vector<double> extra;
    for (std::size_t i = 1; i + 1 < sweep.rows.size(); ++i) {
      if (sweep.rows[i].sigma < sweep.rows[i - 1].sigma &&
          sweep.rows[i].sigma < sweep.rows[i + 1].sigma) {
        extra.push_back(0.5 * (sweep.rows[i - 1].lam + sweep.rows[i].lam));
        extra.push_back(0.5 * (sweep.rows[i].lam + sweep.rows[i + 1].lam));
      }
    }
    if (extra.empty()) break;
    std::sort(extra.begin(), extra.end());
    auto rows2 = run_points(extra);
    sweep.rows.insert(sweep.rows.end(), rows2.begin(), rows2.end());
    std::sort(sweep.rows.begin(), sweep.rows.end(),
              [](const ResolventSweepRow& a, const ResolventSweepRow& b) { return a.lam < b.lam; });
  }

  std::vector<double> xs, ys;
  xs.reserve(sweep.rows.size());
  for (const auto& r : sweep.rows) {
    xs.push_back(std::abs(r.lam));
    ys.push_back(r.sigma * r.sigma);
  }
  if (xs.size() >= 8) sweep.envelope = envelope_fit(xs, ys);
  return sweep;
}

struct QuadFormSweepRow {
  double lam = 0.0;
  double mu_min = 0.0;
  double residual = 0.0;
};

struct QuadFormSweep {
  std::vector<QuadFormSweepRow> rows;
  EnvelopeFit envelope;  // c*exp(-C lam) <= mu_min
};

inline QuadFormSweep run_quadform_sweep(GridPtr grid, const std::vector<std::uint8_t>& omega,
                                        double s, std::vector<double> lambdas, double tol,
                                        int threads, std::uint64_t seed) {
  std::sort(lambdas.begin(), lambdas.end());
  QuadFormSweep sweep;
  sweep.rows.resize(lambdas.size());
  const std::size_t nchunks = (lambdas.size() + kSweepChunk - 1) / kSweepChunk;
  parallel_for(nchunks, threads, [&](std::size_t c) {
    cvec warm;
    const std::size_t lo = c * kSweepChunk;
    const std::size_t hi = std::min(lambdas.size(), lo + kSweepChunk);
    for (std::size_t i = lo; i < hi; ++i) {
      const QuadFormResult r = quadform_min_eig_vec(grid, omega, s, lambdas[i], tol, warm,
                                                    seed ^ (0x7f4aULL * (c + 1)));
      sweep.rows[i] = {lambdas[i], r.mu_min, r.residual};
    }
  });
  std::vector<double> xs, ys;
  for (const auto& r : sweep.rows) {
    xs.push_back(r.lam);
    ys.push_back(r.mu_min);
  }
  if (xs.size() >= 8) sweep.envelope = envelope_fit(xs, ys);
  return sweep;
}

struct SpectralConstantCurve {
  std::vector<double> radii;
  std::vector<SpectralConstantResult> constants;
  LineFit log_fit;  // log C(R) vs R
};

inline SpectralConstantCurve run_spectral_constant_sweep(GridPtr grid,
                                                         const std::vector<std::uint8_t>& omega,
                                                         std::vector<double> radii, double tol,
                                                         int threads, std::uint64_t seed) {
  std::sort(radii.begin(), radii.end());
  SpectralConstantCurve curve;
  curve.radii = radii;
  curve.constants.resize(radii.size());
  parallel_for(radii.size(), threads, [&](std::size_t i) {
    curve.constants[i] = spectral_constant(grid, omega, radii[i], tol, seed ^ (0x51caULL * (i + 1)));
  });
  if (radii.size() >= 2) {
    std::vector<double> lc(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) lc[i] = std::log(curve.constants[i].constant);
    curve.log_fit = linear_fit(radii, lc);
  }
  return curve;
}

}  // namespace fracwave
