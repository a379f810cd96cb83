// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Periodic sampling lattice on a d-dimensional torus (d = 1 or 2) together
// with its dual frequency lattice.  Frequencies follow the standard FFT
// layout: index k maps to xi = 2*pi*k'/L with k' = k for k < n/2 and
// k' = k - n otherwise, so the single unpaired Nyquist index sits at k = n/2.

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "fracwave/errors.hpp"
#include "fracwave/fft.hpp"

namespace fracwave {

class TorusGrid {
 public:
  TorusGrid(int dim, std::size_t points_per_axis, double box_len)
      : d_(dim), n_(points_per_axis), box_len_(box_len) {
    if (d_ != 1 && d_ != 2) throw config_error("TorusGrid: dimension must be 1 or 2");
    if (n_ < 8 || !is_pow2(n_))
      throw config_error("TorusGrid: points per axis must be a power of two >= 8");
    if (!(box_len_ > 0.0)) throw config_error("TorusGrid: box length must be positive");
    spacing_ = box_len_ / static_cast<double>(n_);

    freqs_.resize(n_);
    const double base = 2.0 * FftPlan::pi() / box_len_;
    for (std::size_t k = 0; k < n_; ++k) {
      const long long kk = (k < n_ / 2) ? static_cast<long long>(k)
                                        : static_cast<long long>(k) - static_cast<long long>(n_);
      freqs_[k] = base * static_cast<double>(kk);
    }

    freq_sq_.resize(size());
    if (d_ == 1) {
      for (std::size_t k = 0; k < n_; ++k) freq_sq_[k] = freqs_[k] * freqs_[k];
    } else {
      for (std::size_t k0 = 0; k0 < n_; ++k0)
        for (std::size_t k1 = 0; k1 < n_; ++k1)
          freq_sq_[k0 * n_ + k1] = freqs_[k0] * freqs_[k0] + freqs_[k1] * freqs_[k1];
    }
  }

  int dim() const { return d_; }
  std::size_t points_per_axis() const { return n_; }
  double box_len() const { return box_len_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return d_ == 1 ? n_ : n_ * n_; }

  // Quadrature weight h^d; trapezoid is exact for periodic band-limited data.
  double cell_measure() const { return d_ == 1 ? spacing_ : spacing_ * spacing_; }
  double volume() const { return d_ == 1 ? box_len_ : box_len_ * box_len_; }

  const std::vector<double>& axis_freqs() const { return freqs_; }
  double max_axis_freq() const { return FftPlan::pi() * static_cast<double>(n_) / box_len_; }

  // |xi|^2 at flat index (row-major over axes in d = 2).
  double freq_sq(std::size_t idx) const { return freq_sq_[idx]; }
  const std::vector<double>& freq_sq_table() const { return freq_sq_; }

  std::array<double, 2> freq_vec(std::size_t idx) const {
    if (d_ == 1) return {freqs_[idx], 0.0};
    return {freqs_[idx / n_], freqs_[idx % n_]};
  }

  // Physical coordinate of sample idx; axis coordinates in [0, L).
  std::array<double, 2> coord(std::size_t idx) const {
    if (d_ == 1) return {spacing_ * static_cast<double>(idx), 0.0};
    return {spacing_ * static_cast<double>(idx / n_), spacing_ * static_cast<double>(idx % n_)};
  }

  bool is_nyquist(std::size_t idx) const {
    if (d_ == 1) return idx == n_ / 2;
    return (idx / n_) == n_ / 2 || (idx % n_) == n_ / 2;
  }

  // Unitary DFT of a flat sample array (1/sqrt(n) per axis), in place.
  void transform(cd* a, bool inverse) const {
    const FftPlan& plan = fft_plan(n_);
    if (d_ == 1) {
      inverse ? plan.inverse(a) : plan.forward(a);
    } else {
      for (std::size_t r = 0; r < n_; ++r)
        inverse ? plan.inverse(a + r * n_) : plan.forward(a + r * n_);
      std::vector<cd> col(n_);
      for (std::size_t c = 0; c < n_; ++c) {
        for (std::size_t r = 0; r < n_; ++r) col[r] = a[r * n_ + c];
        inverse ? plan.inverse(col.data()) : plan.forward(col.data());
        for (std::size_t r = 0; r < n_; ++r) a[r * n_ + c] = col[r];
      }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(size()));
    for (std::size_t i = 0; i < size(); ++i) a[i] *= scale;
  }

 private:
  int d_;
  std::size_t n_;
  double box_len_;
  double spacing_;
  std::vector<double> freqs_;
  std::vector<double> freq_sq_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

inline GridPtr make_grid(int dim, std::size_t points_per_axis, double box_len) {
  return std::make_shared<const TorusGrid>(dim, points_per_axis, box_len);
}

}  // namespace fracwave
