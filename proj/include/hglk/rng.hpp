#ifndef HGLK_RNG_HPP
#define HGLK_RNG_HPP

// Seeded RNG with hand-rolled distributions. std::mt19937_64 is specified
// bit-exactly by the standard; the distributions in <random> are not, so
// uniform/normal are derived here to keep artifacts reproducible.

#include <cmath>
#include <cstdint>
#include <random>

#include "hglk/grid.hpp"

namespace hglk {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
  }

  // Box-Muller; one spare cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * pi * u2);
  }

  cplx cnormal() { return cplx(normal(), normal()); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Real field with iid standard-normal samples.
inline RVec random_real_field(const Grid& g, Rng& rng) {
  RVec f(g.n);
  for (auto& v : f) v = rng.normal();
  return f;
}

inline CVec random_complex_field(const Grid& g, Rng& rng) {
  CVec f(g.n);
  for (auto& z : f) z = rng.cnormal();
  return f;
}

// Real mean-zero field with spectrum supported on 1 <= |k| <= k_max (DFT bins).
// Sample amplitudes are O(1) regardless of n.
inline RVec random_band_limited_real(const Grid& g, int k_max, Rng& rng) {
  if (k_max < 1 || k_max >= g.n / 2) throw std::invalid_argument("band limit out of range");
  CVec spec(g.n, cplx(0.0, 0.0));
  const double scale = g.n / (2.0 * std::sqrt(static_cast<double>(k_max)));
  for (int k = 1; k <= k_max; ++k) {
    const cplx z = rng.cnormal() * scale;
    spec[k] = z;
    spec[g.n - k] = std::conj(z);
  }
  CVec f = ifft(spec);
  return real_part(f);
}

// Complex field with spectrum supported on 1 <= |k_signed| <= k_max, no symmetry.
inline CVec random_band_limited_complex(const Grid& g, int k_max, Rng& rng) {
  if (k_max < 1 || k_max >= g.n / 2) throw std::invalid_argument("band limit out of range");
  CVec spec(g.n, cplx(0.0, 0.0));
  const double scale = g.n / (2.0 * std::sqrt(static_cast<double>(k_max)));
  for (int k = 1; k <= k_max; ++k) {
    spec[k] = rng.cnormal() * scale;
    spec[g.n - k] = rng.cnormal() * scale;
  }
  return ifft(spec);
}

}  // namespace hglk

#endif  // HGLK_RNG_HPP
