#ifndef HGLK_ELLIPTIC_HPP
#define HGLK_ELLIPTIC_HPP

// Discrete Hamiltonian H = -d/dx (a(x) d/dx) + v(x) on the periodic grid,
// assembled in symmetric flux form with bond-averaged coefficients, plus the
// standing-assumption checks (ellipticity, Lipschitz, multiplier mapping,
// form nonnegativity, Lorentz potential class) and norm-equivalence reports.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hglk/eig.hpp"
#include "hglk/families.hpp"
#include "hglk/grid.hpp"
#include "hglk/matrix.hpp"
#include "hglk/rng.hpp"

namespace hglk {

struct CoefficientField {
  RVec a;
  double c1 = 0.0;   // min sample (ellipticity floor)
  double c2 = 0.0;   // max sample
  double lip = 0.0;  // discrete Lipschitz seminorm max |a_{i+1} - a_i| / h
};

inline CoefficientField make_coefficient(const Grid& g, RVec a) {
  if (static_cast<int>(a.size()) != g.n) throw std::invalid_argument("coefficient size mismatch");
  CoefficientField c;
  c.c1 = *std::min_element(a.begin(), a.end());
  c.c2 = *std::max_element(a.begin(), a.end());
  const double h = g.h();
  for (int i = 0; i < g.n; ++i)
    c.lip = std::max(c.lip, std::abs(a[(i + 1) % g.n] - a[i]) / h);
  c.a = std::move(a);
  return c;
}

// sup over thresholds t of t * (h * #{|v| > t})^{1/q}; the sup is attained in
// the limit t -> m^- for one of the distinct sample magnitudes m, so the count
// uses |v_i| >= m.
inline double lorentz_quasinorm(const Grid& g, const RVec& v, double q) {
  if (q <= 0.0) throw std::invalid_argument("lorentz exponent must be positive");
  if (static_cast<int>(v.size()) != g.n) throw std::invalid_argument("potential size mismatch");
  RVec m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m[i] = std::abs(v[i]);
  std::sort(m.begin(), m.end(), std::greater<double>());
  const double h = g.h();
  double best = 0.0;
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r] == 0.0) break;
    if (r + 1 < m.size() && m[r + 1] == m[r]) continue;  // tie: count the whole group
    best = std::max(best, m[r] * std::pow(h * static_cast<double>(r + 1), 1.0 / q));
  }
  return best;
}

struct PotentialField {
  RVec v;           // total potential = v_singular + v_bounded
  RVec v_singular;  // Lorentz-class part
  RVec v_bounded;   // sup-norm part
  double q = 2.5;
  double theta = 0.5;
  double lorentz_norm = 0.0;  // quasi-norm of v_singular
  double bounded_norm = 0.0;  // max |v_bounded|
};

inline PotentialField make_potential(const Grid& g, RVec v_singular, RVec v_bounded, double q,
                                     double theta) {
  if (static_cast<int>(v_singular.size()) != g.n || static_cast<int>(v_bounded.size()) != g.n)
    throw std::invalid_argument("potential size mismatch");
  PotentialField p;
  p.q = q;
  p.theta = theta;
  p.lorentz_norm = lorentz_quasinorm(g, v_singular, q);
  for (double b : v_bounded) p.bounded_norm = std::max(p.bounded_norm, std::abs(b));
  p.v.resize(g.n);
  for (int i = 0; i < g.n; ++i) p.v[i] = v_singular[i] + v_bounded[i];
  p.v_singular = std::move(v_singular);
  p.v_bounded = std::move(v_bounded);
  return p;
}

// Kinetic flux-form matrix as a sum of bond contributions
// b_i (e_i - e_{i+1})(e_i - e_{i+1})^T with b_i = ((a_i + a_{i+1})/2) / h^2.
// Accumulation keeps the result bitwise symmetric.
inline Mat assemble_kinetic(const Grid& g, const RVec& a) {
  if (static_cast<int>(a.size()) != g.n) throw std::invalid_argument("coefficient size mismatch");
  const int n = g.n;
  const double inv_h2 = 1.0 / (g.h() * g.h());
  Mat m = Mat::zero(n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const double b = 0.5 * (a[i] + a[j]) * inv_h2;
    m.at(i, i) += b;
    m.at(j, j) += b;
    m.at(i, j) -= b;
    m.at(j, i) -= b;
  }
  return m;
}

struct EllipticOperator {
  Grid grid;
  Mat matrix;  // kinetic + diag(v), exactly symmetric
  CoefficientField coeff;
  PotentialField pot;
};

inline EllipticOperator assemble(const Grid& g, CoefficientField coeff, PotentialField pot) {
  if (static_cast<int>(coeff.a.size()) != g.n || static_cast<int>(pot.v.size()) != g.n)
    throw std::invalid_argument("assemble: fields not sampled on this grid");
  EllipticOperator op;
  op.grid = g;
  op.matrix = assemble_kinetic(g, coeff.a);
  for (int i = 0; i < g.n; ++i) op.matrix.at(i, i) += pot.v[i];
  op.coeff = std::move(coeff);
  op.pot = std::move(pot);
  return op;
}

// Direct difference-form application; annihilates constants exactly.
inline CVec apply_flux_form(const Grid& g, const RVec& a, const RVec& v, const CVec& u) {
  if (static_cast<int>(a.size()) != g.n || static_cast<int>(v.size()) != g.n ||
      static_cast<int>(u.size()) != g.n)
    throw std::invalid_argument("flux form size mismatch");
  const int n = g.n;
  const double inv_h2 = 1.0 / (g.h() * g.h());
  CVec out(n);
  for (int i = 0; i < n; ++i) {
    const int ip = (i + 1) % n, im = (i + n - 1) % n;
    const double ap = 0.5 * (a[i] + a[ip]);
    const double am = 0.5 * (a[im] + a[i]);
    out[i] = -(ap * (u[ip] - u[i]) - am * (u[i] - u[im])) * inv_h2 + v[i] * u[i];
  }
  return out;
}

struct EllipticityReport {
  double c1 = 0.0;
  double c2 = 0.0;
  bool pass = false;
};

inline EllipticityReport check_ellipticity(const CoefficientField& coeff) {
  return {coeff.c1, coeff.c2, coeff.c1 > 0.0};
}

// ratio ||((-Lap)^{1/4} a) f||_2 / ||(-Lap)^{1/4} f||_2 for one field.
inline double a3_ratio(const Grid& g, const RVec& a, const CVec& f) {
  const RVec sym = homogeneous_symbol(g, 0.5);
  CVec fa = fourier_multiplier(g, to_complex(a), sym);
  CVec num_field(g.n);
  for (int i = 0; i < g.n; ++i) num_field[i] = fa[i] * f[i];
  const double den = l2_norm(g, fourier_multiplier(g, f, sym));
  if (den < 1e-300) throw NumericalError("a3_ratio: degenerate field");
  return l2_norm(g, num_field) / den;
}

struct A3Report {
  double max_ratio = 0.0;
};

inline A3Report check_a3(const Grid& g, const RVec& a, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_a3 needs trials >= 1");
  const RVec sym = homogeneous_symbol(g, 0.5);
  const CVec fa = fourier_multiplier(g, to_complex(a), sym);
  Rng rng(seed);
  const int k_max = std::max(1, g.n / 4);
  A3Report rep;
  int used = 0;
  for (int t = 0; t < trials; ++t) {
    const CVec f = to_complex(random_band_limited_real(g, k_max, rng));
    const double den = l2_norm(g, fourier_multiplier(g, f, sym));
    if (den <= 1e-14 * l2_norm(g, f)) continue;
    CVec num_field(g.n);
    for (int i = 0; i < g.n; ++i) num_field[i] = fa[i] * f[i];
    rep.max_ratio = std::max(rep.max_ratio, l2_norm(g, num_field) / den);
    ++used;
  }
  if (used == 0) throw NumericalError("check_a3: all trials degenerate");
  return rep;
}

struct FormPositivityReport {
  double theta = 0.0;
  double min_eigenvalue = 0.0;
  bool pass = false;
};

inline double inf_norm(const Mat& m) {
  double best = 0.0;
  for (int i = 0; i < m.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < m.n; ++j) row += std::abs(m.at(i, j));
    best = std::max(best, row);
  }
  return best;
}

// theta * kinetic + potential; nonnegative up to 1e-10 * norm -> pass.
inline FormPositivityReport check_form_positivity(const EllipticOperator& op) {
  Mat form = scale(assemble_kinetic(op.grid, op.coeff.a), op.pot.theta);
  for (int i = 0; i < op.grid.n; ++i) form.at(i, i) += op.pot.v[i];
  EigResult eig = symmetric_eigen(form);
  FormPositivityReport rep;
  rep.theta = op.pot.theta;
  rep.min_eigenvalue = eig.lambda.front();
  rep.pass = rep.min_eigenvalue >= -1e-10 * inf_norm(form);
  return rep;
}

// (||H f|| + ||f||) / ||f||_{H^2}; the H^2 norm uses the exact symbol 1 + xi^2.
inline double h2_equivalence_ratio(const EllipticOperator& op, const CVec& f) {
  const Grid& g = op.grid;
  const double den = sobolev_norm(g, f, 2.0, false);
  if (den < 1e-300) throw NumericalError("h2_equivalence_ratio: zero field");
  return (l2_norm(g, matvec(op.matrix, f)) + l2_norm(g, f)) / den;
}

// (Re<H f, f> + ||f||^2) / ||f||_{H^1}^2.
inline double h1_form_ratio(const EllipticOperator& op, const CVec& f) {
  const Grid& g = op.grid;
  const double h1 = sobolev_norm(g, f, 1.0, false);
  if (h1 < 1e-300) throw NumericalError("h1_form_ratio: zero field");
  const double form = inner_product(g, matvec(op.matrix, f), f).real();
  const double l2 = l2_norm(g, f);
  return (form + l2 * l2) / (h1 * h1);
}

struct SobolevEquivReport {
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double form_ratio_min = 0.0;
  double form_ratio_max = 0.0;
};

// k_max = 0 picks n/8 (top octaves removed so the finite-difference symbol
// stays close to the exact one).
inline SobolevEquivReport sobolev_equivalence_report(const EllipticOperator& op, int trials,
                                                     std::uint64_t seed, int k_max = 0) {
  if (trials < 1) throw std::invalid_argument("sobolev_equivalence_report needs trials >= 1");
  const Grid& g = op.grid;
  const int km = k_max > 0 ? k_max : std::max(1, g.n / 8);
  Rng rng(seed);
  SobolevEquivReport rep;
  rep.ratio_min = rep.form_ratio_min = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const CVec f = to_complex(random_band_limited_real(g, km, rng));
    const double r = h2_equivalence_ratio(op, f);
    const double fr = h1_form_ratio(op, f);
    rep.ratio_min = std::min(rep.ratio_min, r);
    rep.ratio_max = std::max(rep.ratio_max, r);
    rep.form_ratio_min = std::min(rep.form_ratio_min, fr);
    rep.form_ratio_max = std::max(rep.form_ratio_max, fr);
  }
  return rep;
}

}  // namespace hglk

#endif  // HGLK_ELLIPTIC_HPP
