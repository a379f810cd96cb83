// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// In-place radix-2 complex FFT for power-of-two lengths, with a process-wide
// plan cache.  Grids are power-of-two by construction, so no mixed-radix code
// path is needed.  Plans hold only read-only tables and are safe to share
// across threads.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fracwave/errors.hpp"
#include "fracwave/types.hpp"

namespace fracwave {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (!is_pow2(n)) throw config_error("FftPlan: length must be a power of two");
    log2n_ = 0;
    while ((std::size_t{1} << log2n_) < n_) ++log2n_;

    bitrev_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = 0, x = i;
      for (unsigned b = 0; b < log2n_; ++b) {
        r = (r << 1) | (x & 1);
        x >>= 1;
      }
      bitrev_[i] = static_cast<std::uint32_t>(r);
    }

    // tw_[len/2 + k] = exp(-2*pi*i*k/len) for len = 2,4,...,n
    tw_.assign(n_, cd(1.0, 0.0));
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const double ang = -2.0 * pi() / static_cast<double>(len);
      for (std::size_t k = 0; k < len / 2; ++k)
        tw_[len / 2 + k] = cd(std::cos(ang * static_cast<double>(k)),
                              std::sin(ang * static_cast<double>(k)));
    }
  }

  std::size_t size() const { return n_; }

  // Unnormalized transforms: forward uses e^{-2pi i jk/n}, inverse e^{+2pi i jk/n}.
  void forward(cd* a) const { transform(a, false); }
  void inverse(cd* a) const { transform(a, true); }

  static constexpr double pi() { return 3.14159265358979323846; }

 private:
  void transform(cd* a, bool inv) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j = bitrev_[i];
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const cd* w = &tw_[half];
      for (std::size_t blk = 0; blk < n_; blk += len) {
        for (std::size_t k = 0; k < half; ++k) {
          const cd wk = inv ? std::conj(w[k]) : w[k];
          const cd u = a[blk + k];
          const cd v = a[blk + k + half] * wk;
          a[blk + k] = u + v;
          a[blk + k + half] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  unsigned log2n_;
  std::vector<std::uint32_t> bitrev_;
  std::vector<cd> tw_;
};

// Shared plan cache keyed by length.  Creation is serialized; execution is not.
inline const FftPlan& fft_plan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
  return *it->second;
}

}  // namespace fracwave
