#ifndef HGLK_FFT_HPP
#define HGLK_FFT_HPP

// Self-contained iterative radix-2 FFT on power-of-two lengths.
// Forward transform is unnormalized; the inverse carries the 1/n factor,
// so ifft(fft(x)) == x up to rounding.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hglk {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

namespace detail {

inline void bit_reverse_permute(std::vector<cplx>& a) {
  const std::size_t n = a.size();
  std::size_t j = 0;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
}

inline void fft_core(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  bit_reverse_permute(a);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace detail

// In-place DFT with the engineering sign convention: X_k = sum_i x_i e^{-2*pi*i*k*i/n}.
inline void fft_inplace(std::vector<cplx>& a) {
  if (!is_power_of_two(a.size())) throw std::invalid_argument("fft: length must be a power of two");
  detail::fft_core(a, false);
}

inline void ifft_inplace(std::vector<cplx>& a) {
  if (!is_power_of_two(a.size())) throw std::invalid_argument("ifft: length must be a power of two");
  detail::fft_core(a, true);
  const double inv = 1.0 / static_cast<double>(a.size());
  for (auto& z : a) z *= inv;
}

inline std::vector<cplx> fft(std::vector<cplx> a) {
  fft_inplace(a);
  return a;
}

inline std::vector<cplx> ifft(std::vector<cplx> a) {
  ifft_inplace(a);
  return a;
}

}  // namespace hglk

#endif  // HGLK_FFT_HPP
