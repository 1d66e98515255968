#pragma once
// Commutators of multiplication operators with the half-order operator
// D = H^{1/2}: matrix assembly, operator norms by power iteration, ratio
// reports against the Besov/Lorentz and Lipschitz bounds, fractional
// product-rule residuals, the resolvent-integral pairing, and band-localized
// commutator norms.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hglk/besov.hpp"
#include "hglk/elliptic.hpp"
#include "hglk/families.hpp"
#include "hglk/matrix.hpp"
#include "hglk/quadrature.hpp"
#include "hglk/spectral.hpp"

namespace hglk {

// [diag(f), d] entrywise: c_ij = d_ij (f_i - f_j). Exactly antisymmetric
// whenever d is symmetric.
inline Mat commutator_matrix(const RVec& f, const Mat& d) {
  if (static_cast<int>(f.size()) != d.n)
    throw std::invalid_argument("commutator_matrix: field/operator size mismatch");
  Mat c = Mat::zero(d.n);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) c.at(i, j) = d.at(i, j) * (f[i] - f[j]);
  return c;
}

// Largest singular value by power iteration on m^T m. The start vector is a
// fixed quasi-random ramp so results are reproducible; the estimate sequence
// is monotone for m^T m and iteration stops when its relative change drops
// below tol. Exhausting the budget raises NumericalError.
inline double operator_norm(const Mat& m, double tol = 1e-10) {
  if (!(tol > 0.0)) throw std::invalid_argument("operator_norm: tolerance must be positive");
  const int n = m.n;
  if (n == 0) return 0.0;
  if (max_abs(m) == 0.0) return 0.0;
  const Mat mt = transpose(m);

  RVec v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(2.399963229728653 * i);
  auto normalize = [](RVec& x) {
    double s = 0.0;
    for (double t : x) s += t * t;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& t : x) t /= s;
    return s;
  };
  normalize(v);

  double sigma_prev = -1.0;
  const int budget = 200000;
  for (int iter = 0; iter < budget; ++iter) {
    RVec mv = matvec(m, v);
    double mv2 = 0.0;
    for (double t : mv) mv2 += t * t;
    const double sigma = std::sqrt(mv2);
    if (sigma == 0.0) {
      // start vector fell in the kernel of a nonzero matrix; nudge it off
      v[iter % n] += 1.0;
      normalize(v);
      continue;
    }
    if (sigma_prev >= 0.0 && std::fabs(sigma - sigma_prev) <= tol * sigma) return sigma;
    sigma_prev = sigma;
    v = matvec(mt, mv);
    normalize(v);
  }
  throw NumericalError("operator_norm: power iteration did not converge");
}

// Grid-level context for the commutator estimates: the flux-form operator, its
// spectral square root, the dyadic bank, and the Lorentz quasi-norm of the
// combined potential.
struct HalfOrderSetup {
  Grid grid;
  EllipticOperator op;
  SpectralData sd;
  Mat d;  // spectral square root of op.matrix
  DyadicBank bank;
  double pot_lorentz = 0.0;
};

inline HalfOrderSetup make_half_order(const Grid& g, const CoeffSpec& cs, const PotSpec& sing,
                                      const PotSpec& bdd, double q, double theta) {
  HalfOrderSetup s;
  s.grid = g;
  CoefficientField coeff = make_coefficient(g, sample_coeff(g, cs));
  PotentialField pot = make_potential(g, sample_pot(g, sing), sample_pot(g, bdd), q, theta);
  s.op = assemble(g, std::move(coeff), std::move(pot));
  s.sd = eigendecompose(s.op);
  s.d = frac_power_spectral(s.sd, 1.0);
  s.bank = make_bank(g);
  s.pot_lorentz = lorentz_quasinorm(g, s.op.pot.v, q);
  return s;
}

struct BoundParts {
  double besov_term = 0.0;      // homogeneous (1, inf, 1) Besov norm of f
  double potential_term = 0.0;  // Lorentz quasi-norm of v times sup|f|
  double lipschitz = 0.0;       // discrete Lipschitz seminorm of f
};

struct CommutatorReport {
  std::string estimate_id;
  int grid_n = 0;
  double op_norm = 0.0;
  BoundParts bound_parts;
  double ratio = 0.0;    // op_norm / bound; 0 when the bound vanishes
  bool flagged = false;  // vanishing bound paired with a non-negligible norm
  std::vector<double> refinement_ratios;
  std::uint64_t seed = 0;
};

inline double lipschitz_seminorm(const Grid& g, const RVec& f) {
  require_field(g, f.size());
  double lip = 0.0;
  for (int i = 0; i < g.n; ++i)
    lip = std::max(lip, std::fabs(f[(i + 1) % g.n] - f[i]) / g.h());
  return lip;
}

// op_norm([f, D]) against the rough-coefficient bound: homogeneous Besov norm
// of f plus the Lorentz quasi-norm of the potential times sup|f|.
inline CommutatorReport besov_commutator_report(const HalfOrderSetup& s, const RVec& f) {
  require_field(s.grid, f.size());
  CommutatorReport rep;
  rep.estimate_id = "besov_commutator";
  rep.grid_n = s.grid.n;
  rep.op_norm = operator_norm(commutator_matrix(f, s.d), 1e-9);
  const double inf = std::numeric_limits<double>::infinity();
  rep.bound_parts.besov_term = besov_norm(s.bank, to_complex(f), 1.0, inf, 1.0, true).value;
  rep.bound_parts.potential_term = s.pot_lorentz * lebesgue_norm(s.grid, f, inf);
  rep.bound_parts.lipschitz = lipschitz_seminorm(s.grid, f);
  const double bound = rep.bound_parts.besov_term + rep.bound_parts.potential_term;
  if (bound > 0.0)
    rep.ratio = rep.op_norm / bound;
  else
    rep.flagged = rep.op_norm > 1e-10;
  return rep;
}

inline CommutatorReport besov_commutator_ladder(const std::function<double(double)>& f_fn,
                                                const CoeffSpec& cs, const PotSpec& sing,
                                                const PotSpec& bdd, double q, double theta,
                                                const Grid& base, int rungs) {
  if (rungs < 1) throw std::invalid_argument("refinement ladder needs at least one rung");
  CommutatorReport rep;
  std::vector<double> ratios;
  for (int k = 0; k < rungs; ++k) {
    Grid g = Grid::make(base.n << k, base.length);
    HalfOrderSetup s = make_half_order(g, cs, sing, bdd, q, theta);
    rep = besov_commutator_report(s, sample(g, f_fn));
    ratios.push_back(rep.ratio);
  }
  rep.refinement_ratios = std::move(ratios);
  return rep;
}

// op_norm([f, D]) against the Lipschitz seminorm of f, with D built from the
// unit-coefficient, zero-potential operator.
inline CommutatorReport lipschitz_commutator_report(const Grid& g, const RVec& f) {
  require_field(g, f.size());
  const CoeffSpec unit{CoeffKind::constant, 1.0, 0.0, 1, 16, 1};
  const PotSpec none{PotKind::zero, 0.0, 100.0, 3.0, 32, 1};
  HalfOrderSetup s = make_half_order(g, unit, none, none, 3.0, 0.5);
  CommutatorReport rep;
  rep.estimate_id = "lipschitz_commutator";
  rep.grid_n = g.n;
  rep.op_norm = operator_norm(commutator_matrix(f, s.d), 1e-9);
  rep.bound_parts.lipschitz = lipschitz_seminorm(g, f);
  if (rep.bound_parts.lipschitz > 0.0)
    rep.ratio = rep.op_norm / rep.bound_parts.lipschitz;
  else
    rep.flagged = rep.op_norm > 1e-10;
  return rep;
}

inline CommutatorReport lipschitz_commutator_ladder(const std::function<double(double)>& f_fn,
                                                    const Grid& base, int rungs) {
  if (rungs < 1) throw std::invalid_argument("refinement ladder needs at least one rung");
  CommutatorReport rep;
  std::vector<double> ratios;
  for (int k = 0; k < rungs; ++k) {
    Grid g = Grid::make(base.n << k, base.length);
    rep = lipschitz_commutator_report(g, sample(g, f_fn));
    ratios.push_back(rep.ratio);
  }
  rep.refinement_ratios = std::move(ratios);
  return rep;
}

struct LeibnizReport {
  std::string estimate_id = "fractional_leibniz";
  int grid_n = 0;
  double residual = 0.0;        // || M(fg) - f Mg - g Mf ||_2 for M = |grad|^s
  double residual_ratio = 0.0;  // residual / (sup|f| ||Mg||_2); 0 if that vanishes
};

inline LeibnizReport fractional_leibniz_report(const Grid& g, const CVec& f, const CVec& gg,
                                               double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("fractional_leibniz: order must lie in (0,1)");
  require_field(g, f.size());
  require_field(g, gg.size());
  const RVec symbol = homogeneous_symbol(g, s);
  CVec prod(g.n);
  for (int i = 0; i < g.n; ++i) prod[i] = f[i] * gg[i];
  const CVec m_prod = fourier_multiplier(g, prod, symbol);
  const CVec m_f = fourier_multiplier(g, f, symbol);
  const CVec m_g = fourier_multiplier(g, gg, symbol);
  CVec res(g.n);
  for (int i = 0; i < g.n; ++i) res[i] = m_prod[i] - f[i] * m_g[i] - gg[i] * m_f[i];

  LeibnizReport rep;
  rep.grid_n = g.n;
  rep.residual = l2_norm(g, res);
  const double inf = std::numeric_limits<double>::infinity();
  const double denom = lebesgue_norm(g, f, inf) * l2_norm(g, m_g);
  if (denom > 0.0) rep.residual_ratio = rep.residual / denom;
  return rep;
}

struct KatoPonceReport {
  std::string estimate_id = "kato_ponce";
  int grid_n = 0;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

// || M_s(fg) ||_r over ||M_s f||_{p1} ||g||_{q1} + ||f||_{p2} ||M_s g||_{q2},
// requiring the Hoelder relation 1/r = 1/p1 + 1/q1 = 1/p2 + 1/q2.
inline KatoPonceReport kato_ponce_report(const Grid& g, const CVec& f, const CVec& gg, double s,
                                         double r, double p1, double q1, double p2, double q2) {
  auto recip = [](double p) {
    if (std::isinf(p)) return 0.0;
    if (!(p >= 1.0)) throw std::invalid_argument("kato_ponce: exponents must lie in [1, inf]");
    return 1.0 / p;
  };
  const double rr = recip(r);
  if (std::fabs(rr - recip(p1) - recip(q1)) > 1e-12 ||
      std::fabs(rr - recip(p2) - recip(q2)) > 1e-12)
    throw std::invalid_argument("kato_ponce: exponent relation violated");
  if (!(s > 0.0)) throw std::invalid_argument("kato_ponce: order must be positive");
  require_field(g, f.size());
  require_field(g, gg.size());

  const RVec symbol = homogeneous_symbol(g, s);
  CVec prod(g.n);
  for (int i = 0; i < g.n; ++i) prod[i] = f[i] * gg[i];
  const CVec m_prod = fourier_multiplier(g, prod, symbol);
  const CVec m_f = fourier_multiplier(g, f, symbol);
  const CVec m_g = fourier_multiplier(g, gg, symbol);

  KatoPonceReport rep;
  rep.grid_n = g.n;
  rep.numerator = lebesgue_norm(g, m_prod, r);
  rep.denominator = lebesgue_norm(g, m_f, p1) * lebesgue_norm(g, gg, q1) +
                    lebesgue_norm(g, f, p2) * lebesgue_norm(g, m_g, q2);
  if (rep.denominator > 0.0) rep.ratio = rep.numerator / rep.denominator;
  return rep;
}

// <[D, f] v, u> computed directly through the spectral square root.
inline cplx direct_half_commutator_pairing(const HalfOrderSetup& s, const RVec& f, const CVec& u,
                                           const CVec& v) {
  Mat c = commutator_matrix(f, s.d);  // [f, D] = -[D, f]
  CVec x = matvec(c, v);
  for (auto& z : x) z = -z;
  return inner_product(s.grid, x, u);
}

// The same pairing through shifted solves only: with R(y) = (e^y + H)^{-1},
//   <[D, f] v, u> = C0(1) * sum_k w_k e^{3 y_k / 2} <[H, f] R(y_k) v, R(y_k) u>.
// The factor e^{3y/2} is e^{y/2} from the power integral times e^y from the
// change of measure. Factorizations are cached per node so one rule serves
// many (f, u, v) triples.
class ResolventPairing {
 public:
  ResolventPairing(const Grid& g, const Mat& h, const QuadratureRule& rule)
      : grid_(g), h_(h), rule_(rule) {
    if (h.n != g.n) throw std::invalid_argument("resolvent pairing: matrix size mismatch");
    factors_.reserve(static_cast<std::size_t>(rule.count));
    for (int k = 0; k < rule.count; ++k) {
      Mat shifted = h;
      const double lam = std::exp(rule.y[k]);
      for (int i = 0; i < h.n; ++i) shifted.at(i, i) += lam;
      factors_.push_back(Cholesky::factor(shifted));
    }
  }

  ResolventPairing(const EllipticOperator& op, const QuadratureRule& rule)
      : ResolventPairing(op.grid, op.matrix, rule) {}

  cplx pair(const RVec& f, const CVec& u, const CVec& v) const {
    require_field(grid_, f.size());
    require_field(grid_, u.size());
    require_field(grid_, v.size());
    Mat hf = scale(commutator_matrix(f, h_), -1.0);  // [H, f]
    cplx acc(0.0, 0.0);
    for (int k = 0; k < rule_.count; ++k) {
      const CVec ru = factors_[static_cast<std::size_t>(k)].solve(u);
      const CVec rv = factors_[static_cast<std::size_t>(k)].solve(v);
      const CVec x = matvec(hf, rv);
      acc += rule_.w[k] * std::exp(1.5 * rule_.y[k]) * inner_product(grid_, x, ru);
    }
    return balakrishnan_c0(1.0) * acc;
  }

 private:
  Grid grid_;
  Mat h_;
  QuadratureRule rule_;
  std::vector<Cholesky> factors_;
};

struct DyadicCommutatorReport {
  int grid_n = 0;
  int j = 0;
  bool skipped = false;  // band projection of f vanished
  double lhs_low = 0.0;  // op_norm([D, diag(P_j f)] P_{<=j})
  double rhs_low = 0.0;  // 2^j sup|P_j f|
  double lhs_high = 0.0;  // op_norm(P_{>j} [D, diag(P_j f)] P_{>j})
  double rhs_high = 0.0;
};

// Band-localized commutator norms against the 2^j sup|P_j f| reference. The
// low-frequency factor P_{<=j} is the smooth cutoff at scale 2^j; P_{>j} is
// its complement.
inline DyadicCommutatorReport dyadic_commutator_report(const HalfOrderSetup& s, const RVec& f,
                                                       int j) {
  require_field(s.grid, f.size());
  if (j < s.bank.j_min || j > s.bank.j_max)
    throw std::invalid_argument("dyadic_commutator_report: band index outside the bank");
  const Grid& g = s.grid;

  DyadicCommutatorReport rep;
  rep.grid_n = g.n;
  rep.j = j;

  const RVec pjf = real_part(project(s.bank, to_complex(f), j));
  double sup_pjf = 0.0, sup_f = 0.0;
  for (int i = 0; i < g.n; ++i) {
    sup_pjf = std::max(sup_pjf, std::fabs(pjf[i]));
    sup_f = std::max(sup_f, std::fabs(f[i]));
  }
  if (sup_pjf <= 1e-14 * std::max(sup_f, 1e-300)) {
    rep.skipped = true;
    return rep;
  }

  const double scale_j = std::pow(2.0, j);
  RVec low_symbol(g.n);
  for (int k = 0; k < g.n; ++k) low_symbol[k] = chi0(std::fabs(g.xi(k)) / scale_j);
  const Mat p_low = multiplier_matrix(g, low_symbol);
  Mat p_high = Mat::identity(g.n);
  for (std::size_t t = 0; t < p_high.data.size(); ++t) p_high.data[t] -= p_low.data[t];

  const Mat c = commutator_matrix(pjf, s.d);  // sign-flipped commutator; norms agree
  rep.lhs_low = operator_norm(mat_mul(c, p_low), 1e-9);
  rep.lhs_high = operator_norm(mat_mul(mat_mul(p_high, c), p_high), 1e-9);
  rep.rhs_low = scale_j * sup_pjf;
  rep.rhs_high = rep.rhs_low;
  return rep;
}

}  // namespace hglk
