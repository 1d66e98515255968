#ifndef HGLK_FAMILIES_HPP
#define HGLK_FAMILIES_HPP

// Built-in coefficient and potential families. Each family is a continuum
// function of x (periodic on the domain), so a refinement ladder samples the
// same function at every resolution; seeded families draw their shape once
// from the seed, never from the grid.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "hglk/grid.hpp"
#include "hglk/rng.hpp"

namespace hglk {

enum class CoeffKind { constant, sinusoidal, random_lipschitz };

struct CoeffSpec {
  CoeffKind kind = CoeffKind::constant;
  double base = 1.0;
  double amplitude = 0.0;
  int waves = 1;
  int knots = 16;
  std::uint64_t seed = 1;
};

enum class PotKind { zero, constant_well, inverse_power, seeded_noise };

struct PotSpec {
  PotKind kind = PotKind::zero;
  double depth = 0.0;   // constant_well level or noise amplitude
  double vmax = 100.0;  // truncation cap for inverse_power
  double q = 3.0;       // inverse_power exponent: |x|^{-1/q}
  int knots = 32;
  std::uint64_t seed = 1;
};

namespace detail {

inline RVec knot_values(int knots, double lo, double hi, std::uint64_t seed) {
  if (knots < 2) throw std::invalid_argument("seeded family needs at least 2 knots");
  Rng rng(seed);
  RVec y(knots);
  for (auto& v : y) v = rng.uniform(lo, hi);
  return y;
}

// Periodic piecewise-linear interpolation through equally spaced knots.
inline double piecewise_linear_periodic(const RVec& y, double x, double length) {
  const int m = static_cast<int>(y.size());
  double t = (x + 0.5 * length) / length * m;
  t -= m * std::floor(t / m);
  int j = static_cast<int>(t);
  if (j >= m) j = 0;
  const double frac = t - j;
  return y[j] + frac * (y[(j + 1) % m] - y[j]);
}

}  // namespace detail

inline double eval_coeff(const CoeffSpec& spec, double x, double length) {
  switch (spec.kind) {
    case CoeffKind::constant:
      return spec.base;
    case CoeffKind::sinusoidal:
      return spec.base + spec.amplitude * std::sin(2.0 * pi * spec.waves * x / length);
    case CoeffKind::random_lipschitz: {
      const RVec y = detail::knot_values(spec.knots, spec.base - spec.amplitude,
                                         spec.base + spec.amplitude, spec.seed);
      return detail::piecewise_linear_periodic(y, x, length);
    }
  }
  throw std::logic_error("unreachable coefficient kind");
}

inline RVec sample_coeff(const Grid& g, const CoeffSpec& spec) {
  RVec a(g.n);
  if (spec.kind == CoeffKind::random_lipschitz) {
    const RVec y = detail::knot_values(spec.knots, spec.base - spec.amplitude,
                                       spec.base + spec.amplitude, spec.seed);
    for (int i = 0; i < g.n; ++i) a[i] = detail::piecewise_linear_periodic(y, g.x(i), g.length);
    return a;
  }
  for (int i = 0; i < g.n; ++i) a[i] = eval_coeff(spec, g.x(i), g.length);
  return a;
}

inline double eval_pot(const PotSpec& spec, double x, double length) {
  switch (spec.kind) {
    case PotKind::zero:
      return 0.0;
    case PotKind::constant_well:
      return spec.depth;
    case PotKind::inverse_power: {
      if (spec.q <= 0.0) throw std::invalid_argument("inverse_power family needs q > 0");
      const double ax = std::abs(x);
      const double raw = ax == 0.0 ? spec.vmax : std::pow(ax, -1.0 / spec.q);
      return std::min(spec.vmax, raw);
    }
    case PotKind::seeded_noise: {
      const RVec y = detail::knot_values(spec.knots, -spec.depth, spec.depth, spec.seed);
      return detail::piecewise_linear_periodic(y, x, length);
    }
  }
  throw std::logic_error("unreachable potential kind");
}

inline RVec sample_pot(const Grid& g, const PotSpec& spec) {
  RVec v(g.n);
  if (spec.kind == PotKind::seeded_noise) {
    const RVec y = detail::knot_values(spec.knots, -spec.depth, spec.depth, spec.seed);
    for (int i = 0; i < g.n; ++i) v[i] = detail::piecewise_linear_periodic(y, g.x(i), g.length);
    return v;
  }
  for (int i = 0; i < g.n; ++i) v[i] = eval_pot(spec, g.x(i), g.length);
  return v;
}

}  // namespace hglk

#endif  // HGLK_FAMILIES_HPP
