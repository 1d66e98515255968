#ifndef HGLK_GRID_HPP
#define HGLK_GRID_HPP

// Uniform periodic 1-D grid on [-L/2, L/2), discrete inner products and norms,
// and Fourier-multiplier application. Substrate for every other header.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hglk/fft.hpp"

namespace hglk {

inline constexpr double pi = 3.141592653589793238462643383279502884;

using RVec = std::vector<double>;
using CVec = std::vector<cplx>;

struct Grid {
  int n = 0;        // sample count, power of two
  double length = 0.0;  // domain length L; domain is [-L/2, L/2) periodic

  static Grid make(int n, double length) {
    if (n <= 0 || !is_power_of_two(static_cast<std::size_t>(n)))
      throw std::invalid_argument("grid: n must be a positive power of two");
    if (!(length > 0.0)) throw std::invalid_argument("grid: length must be positive");
    return Grid{n, length};
  }

  double h() const { return length / n; }
  double x(int i) const { return -0.5 * length + h() * i; }

  // Frequency of DFT bin k (0 <= k < n): xi = 2*pi*k_signed/L with k_signed in [-n/2, n/2).
  double xi(int k) const {
    const int ks = (k < n / 2) ? k : k - n;
    return 2.0 * pi * ks / length;
  }

  bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw std::invalid_argument("fields live on different grids");
}

inline void require_field(const Grid& g, std::size_t len) {
  if (len != static_cast<std::size_t>(g.n)) throw std::invalid_argument("field length does not match grid");
}

inline RVec sample(const Grid& g, const std::function<double(double)>& f) {
  RVec out(g.n);
  for (int i = 0; i < g.n; ++i) out[i] = f(g.x(i));
  return out;
}

inline CVec csample(const Grid& g, const std::function<cplx(double)>& f) {
  CVec out(g.n);
  for (int i = 0; i < g.n; ++i) out[i] = f(g.x(i));
  return out;
}

inline CVec to_complex(const RVec& f) {
  CVec out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = cplx(f[i], 0.0);
  return out;
}

inline RVec real_part(const CVec& f) {
  RVec out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

// h * sum_i f_i * conj(g_i): discrete L^2 pairing.
inline cplx inner_product(const Grid& g, const CVec& f, const CVec& w) {
  require_field(g, f.size());
  require_field(g, w.size());
  cplx acc(0.0, 0.0);
  for (int i = 0; i < g.n; ++i) acc += f[i] * std::conj(w[i]);
  return acc * g.h();
}

inline double lebesgue_norm(const Grid& g, const CVec& f, double p) {
  require_field(g, f.size());
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : f) m = std::max(m, std::abs(z));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lebesgue_norm: p must be >= 1");
  double acc = 0.0;
  for (const auto& z : f) acc += std::pow(std::abs(z), p);
  return std::pow(g.h() * acc, 1.0 / p);
}

inline double lebesgue_norm(const Grid& g, const RVec& f, double p) {
  return lebesgue_norm(g, to_complex(f), p);
}

inline double l2_norm(const Grid& g, const CVec& f) { return lebesgue_norm(g, f, 2.0); }

// Applies m(xi_k) to the spectrum of f. The symbol is real-valued.
inline CVec fourier_multiplier(const Grid& g, const CVec& f, const std::function<double(double)>& m) {
  require_field(g, f.size());
  CVec spec = fft(f);
  for (int k = 0; k < g.n; ++k) spec[k] *= m(g.xi(k));
  ifft_inplace(spec);
  return spec;
}

// Same, with a pre-sampled symbol indexed by DFT bin.
inline CVec fourier_multiplier(const Grid& g, const CVec& f, const RVec& symbol) {
  require_field(g, f.size());
  require_field(g, symbol.size());
  CVec spec = fft(f);
  for (int k = 0; k < g.n; ++k) spec[k] *= symbol[k];
  ifft_inplace(spec);
  return spec;
}

// |xi|^s with the zero mode mapped to 0 (spectral calculus at eigenvalue 0).
inline RVec homogeneous_symbol(const Grid& g, double s) {
  RVec sym(g.n);
  for (int k = 0; k < g.n; ++k) {
    const double xi = g.xi(k);
    sym[k] = (xi == 0.0) ? 0.0 : std::pow(std::fabs(xi), s);
  }
  return sym;
}

inline RVec inhomogeneous_symbol(const Grid& g, double s) {
  RVec sym(g.n);
  for (int k = 0; k < g.n; ++k) {
    const double xi = g.xi(k);
    sym[k] = std::pow(1.0 + xi * xi, 0.5 * s);
  }
  return sym;
}

// Sobolev norm via multiplier: (1+|xi|^2)^{s/2} (inhomogeneous) or |xi|^s (homogeneous,
// mean mode annihilated for every s).
inline double sobolev_norm(const Grid& g, const CVec& f, double s, bool homogeneous) {
  const RVec sym = homogeneous ? homogeneous_symbol(g, s) : inhomogeneous_symbol(g, s);
  return l2_norm(g, fourier_multiplier(g, f, sym));
}

// Spectral derivative: multiplies the spectrum by i*xi_k. The Nyquist bin is
// zeroed so real input stays real.
inline CVec spectral_derivative(const Grid& g, const CVec& f) {
  require_field(g, f.size());
  CVec spec = fft(f);
  for (int k = 0; k < g.n; ++k) spec[k] *= cplx(0.0, g.xi(k));
  if (g.n % 2 == 0) spec[g.n / 2] = cplx(0.0, 0.0);
  ifft_inplace(spec);
  return spec;
}

}  // namespace hglk

#endif  // HGLK_GRID_HPP
