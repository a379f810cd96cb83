// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "fracwave/damping.hpp"
#include "fracwave/field.hpp"
#include "fracwave/fitting.hpp"
#include "fracwave/grid.hpp"
#include "fracwave/sweeps.hpp"
#include "fracwave/uncertainty.hpp"
#include "oracles.hpp"

using namespace fracwave;

TEST_CASE("off-annulus gap is at least one (continuum pre-check)", "[uncertainty]") {
  // brute-force oracle over a dense mu grid, run before trusting the lattice scan
  for (double s : {1.0, 1.5, 2.0, 3.0}) {
    for (int i = 0; i <= 50; ++i) {
      const double lam = 2.0 * static_cast<double>(i);
      const double gap = oracles::offband_gap_continuum(lam, s, std::pow(lam + 40.0, 1.0 / s) + 5.0,
                                                        50000);
      REQUIRE(gap >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("off-annulus gap on the integer lattice", "[uncertainty]") {
  auto g = make_grid(1, 64, 2.0 * FftPlan::pi());
  // lambda = 0, s = 2: annulus keeps only xi = 0; nearest outside is |xi| = 1
  REQUIRE(offband_gap(0.0, 2.0, *g) == Catch::Approx(2.0));
  // s = 1 reduces the symbol to mu itself
  const double gap1 = offband_gap(3.0, 1.0, *g);
  REQUIRE(gap1 >= 1.0 - 1e-12);
  // every lattice point inside the annulus yields the +inf sentinel
  auto tiny = make_grid(1, 8, 2000.0);  // max |xi| ~ 0.0126, all inside A_1
  REQUIRE(std::isinf(offband_gap(1.0, 2.0, *tiny)));
}

TEST_CASE("discrete gap dominates one over a sweep", "[uncertainty]") {
  auto g = make_grid(1, 256, 13.0);
  for (double s : {1.0, 1.5, 2.0, 3.0})
    for (int i = 0; i <= 80; ++i) {
      const double lam = 100.0 * i / 80.0;
      REQUIRE(offband_gap(lam, s, *g) >= 1.0 - 1e-12);
    }
}

TEST_CASE("spectral constant trivial cases", "[uncertainty]") {
  auto g = make_grid(1, 128, 16.0);
  std::vector<std::uint8_t> full(g->size(), 1);
  for (double R : {0.0, 2.0, 8.0}) {
    auto r = spectral_constant(g, full, R);
    REQUIRE(r.constant == Catch::Approx(1.0).margin(1e-7));
  }
  // mean mode only: constants give ||f||_Omega^2 = rho ||f||^2
  auto p = make_stripes(g, 2.0, 0.5, 1.0);
  auto omega = p.level_set(0.5);
  auto r0 = spectral_constant(g, omega, 0.0);
  REQUIRE(r0.constant == Catch::Approx(std::sqrt(2.0)).epsilon(1e-9));
  REQUIRE(r0.band_dim == 1);
}

TEST_CASE("spectral constant matches a dense band eigensolve", "[uncertainty]") {
  auto g = make_grid(1, 128, 16.0);
  auto omega = make_stripes(g, 2.0, 0.5, 1.0).level_set(0.5);
  for (double R : {2.0, 4.0, 8.0}) {
    // dense oracle: restrict P_R M P_R to the band coordinates
    std::vector<std::size_t> band;
    for (std::size_t i = 0; i < g->size(); ++i)
      if (g->freq_sq(i) <= R * R) band.push_back(i);
    auto apply_band = [&](const cvec& in, cvec& out) {
      cvec spec(g->size(), cd(0.0, 0.0));
      for (std::size_t k = 0; k < band.size(); ++k) spec[band[k]] = in[k];
      g->transform(spec.data(), true);
      for (std::size_t i = 0; i < g->size(); ++i)
        if (!omega[i]) spec[i] = cd(0.0, 0.0);
      g->transform(spec.data(), false);
      out.resize(band.size());
      for (std::size_t k = 0; k < band.size(); ++k) out[k] = spec[band[k]];
    };
    auto dense = oracles::dense_from_action(apply_band, band.size());
    const double mu_truth = oracles::dense_smallest_eigenvalue(dense);
    auto r = spectral_constant(g, omega, R);
    REQUIRE(r.lambda_min == Catch::Approx(mu_truth).epsilon(1e-7));
  }
}

TEST_CASE("spectral constant is monotone in R and antitone in Omega", "[uncertainty]") {
  auto g = make_grid(1, 256, 16.0);
  auto thin = make_stripes(g, 4.0, 0.25, 1.0).level_set(0.5);
  auto wide = make_stripes(g, 4.0, 0.75, 1.0).level_set(0.5);
  // same phase: the duty-0.25 on-set is contained in the duty-0.75 one
  double prev_thin = 0.0;
  for (double R : {1.0, 2.0, 4.0, 8.0}) {
    const double c_thin = spectral_constant(g, thin, R).constant;
    const double c_wide = spectral_constant(g, wide, R).constant;
    REQUIRE(c_thin >= prev_thin - 1e-9);
    REQUIRE(c_wide <= c_thin + 1e-9);
    prev_thin = c_thin;
  }
}

TEST_CASE("quadform eigenvalue closed forms", "[uncertainty]") {
  auto g = make_grid(1, 64, 2.0 * FftPlan::pi());
  std::vector<std::uint8_t> full(g->size(), 1), empty(g->size(), 0);
  const double lam = 5.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double d = frac_symbol_value_sq(g->freq_sq(i), 2.0, SymbolRole::full) - lam;
    best = std::min(best, d * d);
  }
  REQUIRE(quadform_min_eig(g, full, 2.0, lam).mu_min == Catch::Approx(1.0 + best).margin(1e-8));
  REQUIRE(quadform_min_eig(g, empty, 2.0, lam).mu_min == Catch::Approx(best).margin(1e-8));
}

TEST_CASE("quadform matches a dense eigensolve on stripes", "[uncertainty]") {
  auto g = make_grid(1, 128, 16.0);
  auto omega = make_stripes(g, 2.0, 0.5, 1.0).level_set(0.5);
  std::vector<double> wsq(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double d = frac_symbol_value_sq(g->freq_sq(i), 2.0, SymbolRole::full) - 5.0;
    wsq[i] = d * d;
  }
  auto apply = [&](const cvec& in, cvec& out) {
    cvec phys = in;
    g->transform(phys.data(), true);
    for (std::size_t i = 0; i < g->size(); ++i)
      if (!omega[i]) phys[i] = cd(0.0, 0.0);
    g->transform(phys.data(), false);
    out.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = wsq[i] * in[i] + phys[i];
  };
  const double truth = oracles::dense_smallest_eigenvalue(oracles::dense_from_action(apply, g->size()));
  const auto got = quadform_min_eig(g, omega, 2.0, 5.0, 1e-9);
  REQUIRE(got.mu_min == Catch::Approx(truth).epsilon(1e-6));
  REQUIRE(got.mu_min > 0.0);  // positive measure makes Q_lam positive definite
}

TEST_CASE("quadform ground-mode upper bound", "[uncertainty]") {
  auto g = make_grid(1, 128, 16.0);
  auto omega = make_stripes(g, 2.0, 0.5, 1.0).level_set(0.5);
  for (double lam : {0.0, 2.0, 7.0}) {
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double d = frac_symbol_value_sq(g->freq_sq(i), 2.0, SymbolRole::full) - lam;
      dist = std::min(dist, d * d);
    }
    REQUIRE(quadform_min_eig(g, omega, 2.0, lam).mu_min <= 1.0 + dist + 1e-9);
  }
}

TEST_CASE("envelope fit basics", "[uncertainty]") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) {
    xs.push_back(0.5 * i);
    ys.push_back(std::exp(-2.0 * 0.5 * i));
  }
  auto env = envelope_fit(xs, ys);
  REQUIRE(env.c == Catch::Approx(1.0).epsilon(1e-10));
  REQUIRE(env.C == Catch::Approx(2.0).epsilon(1e-10));
  REQUIRE(env.max_above <= 1e-10);

  std::vector<double> flat(ys.size(), 0.3);
  auto envf = envelope_fit(xs, flat);
  REQUIRE(envf.c == Catch::Approx(0.3).epsilon(1e-10));
  REQUIRE(envf.C == Catch::Approx(0.0).margin(1e-10));

  std::vector<double> bad = flat;
  bad[3] = 0.0;
  REQUIRE_THROWS_AS(envelope_fit(xs, bad), config_error);
}

TEST_CASE("envelope minorizes its sample and generalizes nearby", "[uncertainty]") {
  auto g = make_grid(1, 256, 16.0);
  auto omega = make_stripes(g, 2.0, 0.5, 1.0).level_set(0.5);
  auto sweep = run_quadform_sweep(g, omega, 2.0, linspace(0.0, 12.0, 17), 1e-8, 2, 404);
  REQUIRE(sweep.envelope.c > 0.0);
  for (const auto& row : sweep.rows) {
    const double env = sweep.envelope.c * std::exp(-sweep.envelope.C * row.lam);
    REQUIRE(env <= row.mu_min * (1.0 + 1e-9));
  }
  // fresh out-of-sample lambdas: at most a 2x dip below the envelope
  for (double lam : {0.25, 3.3, 9.7}) {
    const double mu = quadform_min_eig(g, omega, 2.0, lam).mu_min;
    const double env = sweep.envelope.c * std::exp(-sweep.envelope.C * lam);
    REQUIRE(mu >= env / 2.0);
  }
}

TEST_CASE("measured restriction constants satisfy the projection chain", "[uncertainty]") {
  auto g = make_grid(1, 256, 16.0);
  auto omega = make_stripes(g, 2.0, 0.5, 1.0).level_set(0.5);
  Rng rng(79);
  for (int trial = 0; trial < 100; ++trial) {
    const double lam = rng.uniform(0.0, 30.0);
    auto f = random_field(g, rng);
    const double chat = std::pow(spectral_constant(g, omega, lam + 2.0).constant, 2);
    auto pf = project_annulus(f, lam, 2.0);
    auto qf = f - pf;
    const double lhs = std::pow(l2_norm(f), 2);
    const double rhs = 2.0 * chat * std::pow(l2_norm_on(f, omega), 2) +
                       (2.0 * chat + 1.0) * std::pow(l2_norm(qf), 2);
    REQUIRE(lhs <= rhs * (1.0 + 1e-8));
  }
}
