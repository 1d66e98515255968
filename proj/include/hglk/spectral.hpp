#ifndef HGLK_SPECTRAL_HPP
#define HGLK_SPECTRAL_HPP

// Spectral calculus for the assembled operator: eigendecomposition, fractional
// powers by two independent routes (eigenbasis vs resolvent integral),
// resolvents, Yosida decay tables, operator-monotonicity checks, and the
// sigma-weighted resolvent bound.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "hglk/eig.hpp"
#include "hglk/elliptic.hpp"
#include "hglk/quadrature.hpp"

namespace hglk {

struct SpectralData {
  Grid grid;
  RVec lambda;  // ascending
  Mat vectors;  // Euclidean-orthonormal columns; vectors / sqrt(h) is
                // orthonormal under the h-weighted inner product
};

inline SpectralData eigendecompose_matrix(const Grid& g, const Mat& m) {
  if (m.n != g.n) throw std::invalid_argument("matrix size does not match grid");
  EigResult e = symmetric_eigen(m);
  return SpectralData{g, std::move(e.lambda), std::move(e.vectors)};
}

inline SpectralData eigendecompose(const EllipticOperator& op) {
  return eigendecompose_matrix(op.grid, op.matrix);
}

// Smallest eigenvalue above the rounding floor; falls back to the top of the
// spectrum when everything sits in the kernel.
inline double lambda_min_positive(const RVec& lambda) {
  double lam_abs = 0.0;
  for (double l : lambda) lam_abs = std::max(lam_abs, std::abs(l));
  const double tol = 1e-10 * std::max(lam_abs, 1e-300);
  for (double l : lambda) {
    if (l > tol) return l;
  }
  return std::max(lam_abs, 1.0);
}

inline CVec eigen_coeffs(const SpectralData& sd, const CVec& u) {
  require_field(sd.grid, u.size());
  const int n = sd.grid.n;
  CVec c(n);
  for (int k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = sd.vectors.at(i, k);
      re += e * u[i].real();
      im += e * u[i].imag();
    }
    c[k] = cplx(re, im);
  }
  return c;
}

inline CVec eigen_synth(const SpectralData& sd, const CVec& c) {
  const int n = sd.grid.n;
  CVec u(n, cplx(0.0, 0.0));
  for (int k = 0; k < n; ++k) {
    const cplx ck = c[k];
    if (ck == cplx(0.0, 0.0)) continue;
    for (int i = 0; i < n; ++i) u[i] += sd.vectors.at(i, k) * ck;
  }
  return u;
}

// g(H) u for a scalar function applied on the spectrum.
inline CVec apply_eigen_function(const SpectralData& sd, const std::function<cplx(double)>& fn,
                                 const CVec& u) {
  CVec c = eigen_coeffs(sd, u);
  for (int k = 0; k < sd.grid.n; ++k) c[k] *= fn(sd.lambda[k]);
  return eigen_synth(sd, c);
}

namespace detail {

// E diag(d) E^T, symmetrized against multiply roundoff.
inline Mat eigen_rebuild(const Mat& vectors, const RVec& d) {
  const int n = vectors.n;
  Mat scaled = vectors;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) scaled.at(i, j) *= d[j];
  Mat m = mat_mul(scaled, transpose(vectors));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m.at(i, j) + m.at(j, i));
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  return m;
}

}  // namespace detail

// H^{s/2} through the eigenbasis; 0^{s/2} := 0 on the kernel.
inline Mat frac_power_spectral(const SpectralData& sd, double s) {
  if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument("fractional order must lie in (0,2)");
  double lam_abs = 0.0;
  for (double l : sd.lambda) lam_abs = std::max(lam_abs, std::abs(l));
  RVec p(sd.lambda.size());
  for (std::size_t k = 0; k < sd.lambda.size(); ++k) {
    const double l = sd.lambda[k];
    if (l < -1e-10 * lam_abs)
      throw NumericalError("frac_power_spectral: negative eigenvalue " + std::to_string(l) +
                           "; form nonnegativity violated");
    p[k] = l <= 0.0 ? 0.0 : std::pow(l, 0.5 * s);
  }
  return detail::eigen_rebuild(sd.vectors, p);
}

struct BalakrishnanResult {
  Mat matrix;
  bool range_warning = false;
};

// H^{s/2} as C0(s) * sum_k w_k e^{y_k s/2} (lambda_k + H)^{-1} H with
// lambda_k = e^{y_k}. The integral itself runs entirely on Cholesky solves;
// eigenvalues appear only in the range-coverage warning.
inline BalakrishnanResult frac_power_balakrishnan(const EllipticOperator& op, double s,
                                                  const QuadratureRule& rule) {
  if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument("fractional order must lie in (0,2)");
  const int n = op.grid.n;

  BalakrishnanResult res;
  {
    EigResult bounds = symmetric_eigen(op.matrix);
    const double lam_max = std::max(std::abs(bounds.lambda.front()), std::abs(bounds.lambda.back()));
    const double lam_min_pos = lambda_min_positive(bounds.lambda);
    res.range_warning = rule.y_min > std::log(1e-3 * lam_min_pos) ||
                        rule.y_max < std::log(1e3 * std::max(lam_max, 1e-300));
  }

  Mat acc = Mat::zero(n);
  RVec col(n);
  for (int k = 0; k < rule.count; ++k) {
    const double lam = std::exp(rule.y[k]);
    Mat shifted = op.matrix;
    for (int i = 0; i < n; ++i) shifted.at(i, i) += lam;
    const Cholesky ch = Cholesky::factor(shifted);
    const double coef = rule.w[k] * std::exp(0.5 * s * rule.y[k]);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) col[i] = op.matrix.at(i, j);
      RVec sol = ch.solve(col);
      for (int i = 0; i < n; ++i) acc.at(i, j) += coef * sol[i];
    }
  }
  Mat m = scale(acc, balakrishnan_c0(s));
  res.matrix = scale(add(m, transpose(m)), 0.5);
  return res;
}

inline CVec resolvent_apply(const SpectralData& sd, double lambda, const CVec& f) {
  if (!(lambda > 0.0)) throw std::invalid_argument("resolvent needs lambda > 0");
  CVec c = eigen_coeffs(sd, f);
  for (int k = 0; k < sd.grid.n; ++k) c[k] /= (lambda + sd.lambda[k]);
  return eigen_synth(sd, c);
}

inline CVec centered_difference(const Grid& g, const CVec& u) {
  require_field(g, u.size());
  const int n = g.n;
  const double inv2h = 1.0 / (2.0 * g.h());
  CVec out(n);
  for (int i = 0; i < n; ++i) out[i] = (u[(i + 1) % n] - u[(i + n - 1) % n]) * inv2h;
  return out;
}

struct YosidaRow {
  double j = 0.0;
  double norm1 = 0.0;  // || j^{1/2} grad (j + H)^{-1} f ||
  double norm2 = 0.0;  // || grad grad (j + H)^{-1} f ||
};

inline std::vector<YosidaRow> yosida_decay_report(const SpectralData& sd, const CVec& f,
                                                  const RVec& j_list) {
  std::vector<YosidaRow> rows;
  rows.reserve(j_list.size());
  for (double j : j_list) {
    CVec res = resolvent_apply(sd, j, f);
    CVec g1 = centered_difference(sd.grid, res);
    CVec g2 = centered_difference(sd.grid, g1);
    rows.push_back({j, std::sqrt(j) * l2_norm(sd.grid, g1), l2_norm(sd.grid, g2)});
  }
  return rows;
}

// m^s for symmetric PSD m (s in (0,1]); small negative eigenvalues from
// roundoff clamp to zero, genuine ones reject.
inline Mat psd_power(const Mat& m, double s) {
  EigResult e = symmetric_eigen(m);
  const double lam_abs = std::max(std::abs(e.lambda.front()), std::abs(e.lambda.back()));
  RVec p(e.lambda.size());
  for (std::size_t k = 0; k < e.lambda.size(); ++k) {
    const double l = e.lambda[k];
    if (l < -1e-9 * std::max(lam_abs, 1.0))
      throw std::invalid_argument("psd_power: matrix not positive semidefinite, eigenvalue " +
                                  std::to_string(l));
    p[k] = l <= 0.0 ? 0.0 : std::pow(l, s);
  }
  return detail::eigen_rebuild(e.vectors, p);
}

struct LoewnerReport {
  double min_gap_eig = 0.0;
  bool pass = false;
  bool inverse_checked = false;
  double inverse_min_gap = 0.0;
  bool inverse_pass = false;
};

// Checks m1 <= m2  =>  m1^s <= m2^s (s in (0,1]), plus the inverse statement
// m2^{-1} <= m1^{-1} when m1 is invertible.
inline LoewnerReport loewner_check(const Mat& m1, const Mat& m2, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("loewner_check needs s in (0,1]");
  require_square_match(m1, m2);
  EigResult diff = symmetric_eigen(sub(m2, m1));
  if (diff.lambda.front() < -1e-10)
    throw std::invalid_argument("loewner_check precondition m1 <= m2 violated; offending eigenvalue " +
                                std::to_string(diff.lambda.front()));
  Mat p1 = psd_power(m1, s);
  Mat p2 = psd_power(m2, s);
  EigResult gap = symmetric_eigen(sub(p2, p1));
  EigResult e2 = symmetric_eigen(p2);
  const double p2_norm = std::max(std::abs(e2.lambda.front()), std::abs(e2.lambda.back()));

  LoewnerReport rep;
  rep.min_gap_eig = gap.lambda.front();
  rep.pass = rep.min_gap_eig >= -1e-9 * p2_norm;

  EigResult e1 = symmetric_eigen(m1);
  const double lam1_max = std::max(std::abs(e1.lambda.front()), std::abs(e1.lambda.back()));
  if (e1.lambda.front() > 1e-12 * std::max(lam1_max, 1.0)) {
    RVec inv1(e1.lambda.size());
    for (std::size_t k = 0; k < e1.lambda.size(); ++k) inv1[k] = 1.0 / e1.lambda[k];
    Mat m1_inv = detail::eigen_rebuild(e1.vectors, inv1);
    EigResult e2full = symmetric_eigen(m2);
    RVec inv2(e2full.lambda.size());
    for (std::size_t k = 0; k < e2full.lambda.size(); ++k) inv2[k] = 1.0 / e2full.lambda[k];
    Mat m2_inv = detail::eigen_rebuild(e2full.vectors, inv2);
    EigResult inv_gap = symmetric_eigen(sub(m1_inv, m2_inv));
    const double inv1_norm = 1.0 / e1.lambda.front();
    rep.inverse_checked = true;
    rep.inverse_min_gap = inv_gap.lambda.front();
    rep.inverse_pass = rep.inverse_min_gap >= -1e-9 * inv1_norm;
  }
  return rep;
}

// Scalar normalization c(sigma)^2 = int lambda^{2 sigma - 3/2} (1+lambda)^{-2 sigma} d lambda
// through the given rule.
inline double c_sigma_squared(double sigma, const QuadratureRule& rule) {
  double acc = 0.0;
  for (int k = 0; k < rule.count; ++k) {
    const double y = rule.y[k];
    acc += rule.w[k] * std::exp((2.0 * sigma - 0.5) * y) * std::pow(1.0 + std::exp(y), -2.0 * sigma);
  }
  return acc;
}

struct WeightedResolventReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// lhs = (int ||lambda^{sigma-3/4} H^{1/4} (lambda+H)^{-sigma} f||_2^2 dlambda)^{1/2}
// versus rhs = c(sigma) ||f||_2; the per-mode lambda-integral is scale
// invariant, so equality holds exactly on the complement of the kernel.
inline WeightedResolventReport weighted_resolvent_bound(const SpectralData& sd, const CVec& f,
                                                        double sigma, const QuadratureRule& rule) {
  if (!(sigma > 0.25 && sigma <= 1.0)) throw std::invalid_argument("sigma must lie in (1/4, 1]");
  const int n = sd.grid.n;
  const int panels = rule.count / 4;

  // normalization with end-panel convergence tracking
  double c2 = 0.0, first_panel = 0.0, last_panel = 0.0;
  for (int k = 0; k < rule.count; ++k) {
    const double y = rule.y[k];
    const double term =
        rule.w[k] * std::exp((2.0 * sigma - 0.5) * y) * std::pow(1.0 + std::exp(y), -2.0 * sigma);
    c2 += term;
    if (k / 4 == 0) first_panel += term;
    if (k / 4 == panels - 1) last_panel += term;
  }
  if (!(c2 > 0.0) || first_panel > 1e-8 * c2 || last_panel > 1e-8 * c2)
    throw NumericalError("weighted resolvent quadrature did not converge on this range");

  CVec c = eigen_coeffs(sd, f);
  RVec c_sq(n);
  for (int k = 0; k < n; ++k) c_sq[k] = std::norm(c[k]);

  double lhs2 = 0.0;
  for (int k = 0; k < rule.count; ++k) {
    const double lam = std::exp(rule.y[k]);
    const double outer = rule.w[k] * std::exp((2.0 * sigma - 0.5) * rule.y[k]);
    double mode_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double mu = std::max(sd.lambda[j], 0.0);
      if (mu <= 0.0) continue;
      mode_sum += std::sqrt(mu) * std::pow(lam + mu, -2.0 * sigma) * c_sq[j];
    }
    lhs2 += outer * mode_sum;
  }
  lhs2 *= sd.grid.h();

  WeightedResolventReport rep;
  rep.lhs = std::sqrt(lhs2);
  rep.rhs = std::sqrt(c2) * l2_norm(sd.grid, f);
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-6);
  return rep;
}

}  // namespace hglk

#endif  // HGLK_SPECTRAL_HPP
