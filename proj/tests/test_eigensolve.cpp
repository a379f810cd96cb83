// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <vector>

#include "fracwave/eigensolve.hpp"
#include "fracwave/rng.hpp"

using namespace fracwave;

namespace {

Eigen::MatrixXcd random_psd(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = rng.normal_complex();
  return B.adjoint() * B;
}

auto matrix_op(const Eigen::MatrixXcd& A) {
  return [&A](const cvec& in, cvec& out) {
    Eigen::Map<const Eigen::VectorXcd> x(in.data(), in.size());
    out.resize(in.size());
    Eigen::Map<Eigen::VectorXcd> y(out.data(), out.size());
    y = A * x;
  };
}

}  // namespace

TEST_CASE("diagonal operator with a clear gap", "[eigensolve]") {
  const std::size_t n = 300;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = 2.0 + static_cast<double>(i);
  d[137] = 0.25;  // isolated smallest
  auto op = [&](const cvec& in, cvec& out) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = d[i] * in[i];
  };
  EigOptions opts;
  opts.tol = 1e-10;
  auto r = smallest_eigenvalue(op, n, 2.0 + n, opts);
  REQUIRE(r.converged);
  REQUIRE(r.value == Catch::Approx(0.25).margin(1e-9));
  REQUIRE(std::abs(std::abs(r.vector[137]) - 1.0) < 1e-6);
}

TEST_CASE("matches a dense eigensolve on random PSD matrices", "[eigensolve]") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const std::size_t n = 80;
    auto A = random_psd(n, seed);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    const double truth = es.eigenvalues()(0);
    EigOptions opts;
    opts.tol = 1e-9;
    auto r = smallest_eigenvalue(matrix_op(A), n, es.eigenvalues()(n - 1) * 1.01 + 1.0, opts);
    REQUIRE(r.converged);
    REQUIRE(r.value == Catch::Approx(truth).margin(1e-8));
    REQUIRE(r.residual <= 1e-9);
  }
}

TEST_CASE("clustered bottom of the spectrum", "[eigensolve]") {
  // near-degenerate smallest pair
  const std::size_t n = 200;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = 5.0 + 3.0 * static_cast<double>(i);
  d[3] = 1.0;
  d[99] = 1.0 + 1e-9;
  auto op = [&](const cvec& in, cvec& out) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = d[i] * in[i];
  };
  EigOptions opts;
  opts.tol = 1e-10;
  auto r = smallest_eigenvalue(op, n, 5.0 + 3.0 * n, opts);
  REQUIRE(r.converged);
  REQUIRE(r.value == Catch::Approx(1.0).margin(5e-9));
}

TEST_CASE("warm start converges and certifies", "[eigensolve]") {
  const std::size_t n = 120;
  auto A = random_psd(n, 9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  EigOptions opts;
  opts.tol = 1e-9;
  auto cold = smallest_eigenvalue(matrix_op(A), n, es.eigenvalues()(n - 1) + 1.0, opts);
  REQUIRE(cold.converged);
  EigOptions warm = opts;
  warm.start = &cold.vector;
  auto hot = smallest_eigenvalue(matrix_op(A), n, es.eigenvalues()(n - 1) + 1.0, warm);
  REQUIRE(hot.converged);
  REQUIRE(hot.value == Catch::Approx(cold.value).margin(1e-8));
  REQUIRE(hot.matvecs <= cold.matvecs);
}

TEST_CASE("tiny dimensions", "[eigensolve]") {
  auto op1 = [](const cvec& in, cvec& out) { out = {3.5 * in[0]}; };
  auto r1 = smallest_eigenvalue(op1, 1, 4.0, {});
  REQUIRE(r1.converged);
  REQUIRE(r1.value == Catch::Approx(3.5));

  auto op2 = [](const cvec& in, cvec& out) {
    out.resize(2);
    out[0] = 2.0 * in[0] + cd(0.0, 1.0) * in[1];
    out[1] = cd(0.0, -1.0) * in[0] + 2.0 * in[1];
  };
  auto r2 = smallest_eigenvalue(op2, 2, 4.0, {});
  REQUIRE(r2.converged);
  REQUIRE(r2.value == Catch::Approx(1.0).margin(1e-9));  // eigenvalues 1 and 3
}

TEST_CASE("unreachable tolerance reports non-convergence", "[eigensolve]") {
  const std::size_t n = 60;
  auto A = random_psd(n, 21);
  EigOptions opts;
  opts.tol = 1e-305;  // below the roundoff floor
  opts.max_matvecs = 4000;
  auto r = smallest_eigenvalue(matrix_op(A), n, 1e4, opts);
  REQUIRE_FALSE(r.converged);
  REQUIRE(r.residual > 0.0);
}
