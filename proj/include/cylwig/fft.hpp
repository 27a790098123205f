// In-repo Fourier kernels: iterative radix-2 FFT for power-of-two sizes and
// a direct O(N^2) summation fallback for everything else. Both use a fixed
// evaluation order, so outputs are byte-stable across runs and thread counts.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cylwig/common.hpp"

namespace cylwig {

inline bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 transform. sign = -1: X_k = sum_j x_j e^{-2*pi*i*jk/N};
// sign = +1 is the unnormalized inverse kernel.
inline void fft_inplace(std::vector<cd>& a, int sign) {
  const std::size_t n = a.size();
  if (!is_pow2(n))
    throw std::invalid_argument("fft_inplace: size must be a power of two");
  if (n == 1) return;
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * kPi / static_cast<double>(len);
    cd wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cd w(1.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cd u = a[i + k];
        cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

inline std::vector<cd> dft_direct(const std::vector<cd>& in, int sign) {
  const std::size_t n = in.size();
  std::vector<cd> out(n, cd(0));
  for (std::size_t k = 0; k < n; ++k) {
    cd acc(0);
    for (std::size_t j = 0; j < n; ++j) {
      double ang =
          sign * 2.0 * kPi * static_cast<double>((j * k) % n) / double(n);
      acc += in[j] * cd(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<cd> transform(const std::vector<cd>& in, int sign) {
  if (is_pow2(in.size())) {
    auto out = in;
    fft_inplace(out, sign);
    return out;
  }
  return dft_direct(in, sign);
}

// Row-major 2-D transform: rows first, then columns.
inline void fft_2d(std::vector<cd>& a, int rows, int cols, int sign) {
  if (a.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("fft_2d: size mismatch");
  std::vector<cd> buf;
  for (int r = 0; r < rows; ++r) {
    buf.assign(a.begin() + std::size_t(r) * cols,
               a.begin() + std::size_t(r + 1) * cols);
    buf = transform(buf, sign);
    std::copy(buf.begin(), buf.end(), a.begin() + std::size_t(r) * cols);
  }
  std::vector<cd> col(rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) col[r] = a[std::size_t(r) * cols + c];
    col = transform(col, sign);
    for (int r = 0; r < rows; ++r) a[std::size_t(r) * cols + c] = col[r];
  }
}

}  // namespace cylwig
