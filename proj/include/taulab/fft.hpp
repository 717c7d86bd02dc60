#pragma once
//! \file fft.hpp
//! Iterative radix-2 complex FFT plus an n-dimensional wrapper. Sizes must
//! be powers of two. Forward transform is unnormalized, inverse divides by
//! the total length, so ifft(fft(x)) == x up to round-off.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace taulab {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_inplace(std::complex<double>* a, std::size_t n, bool inverse) {
  if (!is_power_of_two(n)) throw std::invalid_argument("fft: length must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) a[i] *= inv;
  }
}

// Row-major n-dimensional transform, one axis pass at a time.
inline void fft_nd(std::vector<std::complex<double>>& data, const std::vector<std::size_t>& dims,
                   bool inverse) {
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (data.size() != total) throw std::invalid_argument("fft_nd: size mismatch");

  std::vector<std::complex<double>> line;
  std::size_t stride_after = 1;  // product of dims after the current axis
  for (std::size_t axis = dims.size(); axis-- > 0;) {
    const std::size_t n = dims[axis];
    const std::size_t stride = stride_after;
    const std::size_t block = n * stride;
    line.resize(n);
    for (std::size_t base = 0; base < total; base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::size_t i = 0; i < n; ++i) line[i] = data[base + off + i * stride];
        fft_inplace(line.data(), n, inverse);
        for (std::size_t i = 0; i < n; ++i) data[base + off + i * stride] = line[i];
      }
    }
    stride_after *= n;
  }
}

}  // namespace taulab
