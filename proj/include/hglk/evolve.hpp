#pragma once
// Exponential Strang splitting for du/dt = i D u + |u|^{p-1} u with an exact
// pointwise nonlinear substep, the Duhamel fixed-point oracle, weighted-mass
// diagnostics with the comparison-ODE lower bound, the blow-up threshold
// certificate, and the domain-rescaling scan.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hglk/besov.hpp"
#include "hglk/blowup_ode.hpp"
#include "hglk/commutator.hpp"
#include "hglk/elliptic.hpp"
#include "hglk/families.hpp"
#include "hglk/spectral.hpp"

namespace hglk {

struct HalfStepResult {
  CVec u;
  bool blowup = false;
  double singular_time = 0.0;  // earliest pointwise singularity when blowup
};

// Exact solution of dr/dt = r^p with frozen phase over one half step:
// r <- (r^{1-p} - (p-1) tau)^{-1/(p-1)}. Signals blow-up when any sample
// meets its singularity within tau.
inline HalfStepResult nonlinear_half_step(const CVec& u, double tau, double p) {
  if (!(tau > 0.0)) throw std::invalid_argument("substep length must be positive");
  if (!(p > 1.0)) throw std::invalid_argument("p > 1 required");
  HalfStepResult res;
  res.u = u;
  const double pm1 = p - 1.0;
  double t_min = std::numeric_limits<double>::infinity();
  bool blow = false;
  for (cplx& z : res.u) {
    const double r = std::abs(z);
    if (r == 0.0) continue;
    const double s = std::pow(r, 1.0 - p);  // r^{1-p}
    t_min = std::min(t_min, s / pm1);
    const double rem = s - pm1 * tau;
    if (rem <= 0.0) {
      blow = true;
      continue;
    }
    z *= std::pow(rem, -1.0 / pm1) / r;
  }
  if (blow) {
    res.blowup = true;
    res.singular_time = t_min;
  }
  return res;
}

// e^{i t D} u through the eigenbasis, with D the square root of the operator
// behind sd (kernel modes get phase 1).
inline CVec linear_flow(const SpectralData& sd, double t, const CVec& u) {
  return apply_eigen_function(
      sd,
      [t](double lam) {
        const double root = lam > 0.0 ? std::sqrt(lam) : 0.0;
        return std::exp(cplx(0.0, t * root));
      },
      u);
}

struct StrangResult {
  CVec u;
  bool blowup = false;
  double time_in_step = 0.0;  // pointwise singularity estimate within the step
};

// Half nonlinear, full linear, half nonlinear.
inline StrangResult step_strang(const CVec& u, double dt, const SpectralData& sd, double p) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  StrangResult res;
  HalfStepResult first = nonlinear_half_step(u, 0.5 * dt, p);
  if (first.blowup) {
    res.blowup = true;
    res.time_in_step = first.singular_time;
    return res;
  }
  CVec mid = linear_flow(sd, dt, first.u);
  HalfStepResult second = nonlinear_half_step(mid, 0.5 * dt, p);
  if (second.blowup) {
    res.blowup = true;
    res.time_in_step = 0.5 * dt + second.singular_time;
    return res;
  }
  res.u = std::move(second.u);
  return res;
}

struct PicardResult {
  CVec u;
  RVec distances;  // successive-iterate sup-over-nodes L2 distance
};

namespace detail {

// Composite Simpson weights for i uniform intervals; odd counts close with a
// 3/8 panel, a single interval falls back to the trapezoid.
inline std::vector<double> duhamel_weights(int i) {
  std::vector<double> w(i + 1, 0.0);
  if (i == 0) return w;
  if (i == 1) {
    w[0] = w[1] = 0.5;
    return w;
  }
  const int simpson_end = (i % 2 == 0) ? i : i - 3;
  for (int j = 0; j + 2 <= simpson_end; j += 2) {
    w[j] += 1.0 / 3.0;
    w[j + 1] += 4.0 / 3.0;
    w[j + 2] += 1.0 / 3.0;
  }
  if (i % 2 == 1) {
    w[simpson_end] += 3.0 / 8.0;
    w[simpson_end + 1] += 9.0 / 8.0;
    w[simpson_end + 2] += 9.0 / 8.0;
    w[simpson_end + 3] += 3.0 / 8.0;
  }
  return w;
}

}  // namespace detail

// Fixed-point iteration of the integral form u(t) = e^{itD} u0 +
// int_0^t e^{i(t-tau)D} |u|^{p-1}u dtau on a uniform node grid, composite
// Simpson in tau, everything propagated in eigen coordinates. Growing iterate
// distances (three in a row, or any non-finite) abort with NumericalError.
inline PicardResult picard_oracle(const CVec& u0, double t_final, int k_max, int quad_nodes,
                                  const SpectralData& sd, double p) {
  if (!(t_final > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (k_max < 1 || quad_nodes < 2) throw std::invalid_argument("iteration budget too small");
  if (!(p > 1.0)) throw std::invalid_argument("p > 1 required");
  require_field(sd.grid, u0.size());
  const int n = sd.grid.n;
  const int m = quad_nodes;
  const double delta = t_final / m;
  const double sqrt_h = std::sqrt(sd.grid.h());

  std::vector<CVec> phase(m + 1, CVec(n));
  for (int d = 0; d <= m; ++d)
    for (int k = 0; k < n; ++k) {
      const double root = sd.lambda[k] > 0.0 ? std::sqrt(sd.lambda[k]) : 0.0;
      phase[d][k] = std::exp(cplx(0.0, d * delta * root));
    }

  const CVec c0 = eigen_coeffs(sd, u0);
  std::vector<CVec> traj(m + 1, CVec(n));
  for (int j = 0; j <= m; ++j)
    for (int k = 0; k < n; ++k) traj[j][k] = phase[j][k] * c0[k];

  PicardResult res;
  int rising = 0;
  for (int iter = 0; iter < k_max; ++iter) {
    std::vector<CVec> nc(m + 1);
    for (int j = 0; j <= m; ++j) {
      CVec phys = eigen_synth(sd, traj[j]);
      for (cplx& z : phys) z *= std::pow(std::abs(z), p - 1.0);
      nc[j] = eigen_coeffs(sd, phys);
    }
    double dist = 0.0;
    std::vector<CVec> next(m + 1, CVec(n));
    for (int i = 0; i <= m; ++i) {
      CVec acc(n, cplx(0.0, 0.0));
      const std::vector<double> wq = detail::duhamel_weights(i);
      for (int j = 0; j <= i; ++j) {
        const CVec& ph = phase[i - j];
        for (int k = 0; k < n; ++k) acc[k] += wq[j] * ph[k] * nc[j][k];
      }
      double d2 = 0.0;
      for (int k = 0; k < n; ++k) {
        next[i][k] = phase[i][k] * c0[k] + delta * acc[k];
        d2 += std::norm(next[i][k] - traj[i][k]);
      }
      dist = std::max(dist, sqrt_h * std::sqrt(d2));
    }
    res.distances.push_back(dist);
    if (!std::isfinite(dist))
      throw NumericalError("picard_oracle: outside contraction regime");
    if (!res.distances.empty() && res.distances.size() > 1 &&
        dist > res.distances[res.distances.size() - 2]) {
      if (++rising >= 3) throw NumericalError("picard_oracle: outside contraction regime");
    } else {
      rising = 0;
    }
    traj = std::move(next);
  }
  res.u = eigen_synth(sd, traj[m]);
  return res;
}

struct SimulationConfig {
  Grid grid;
  CoeffSpec coeff;
  PotSpec pot_singular;
  PotSpec pot_bounded;
  double lorentz_q = 3.0;
  double theta = 0.5;
  double p = 2.0;
  double dt = 1e-3;
  double t_max = 1.0;
  double blowup_threshold = 1e8;  // on sup|u|
  double weight_a = 0.7;          // bracket-weight exponent, must lie in (1/2, 1)
  double c_emp = 1.0;             // measured commutator constant for the diagnostics
  CVec u0;
  std::uint64_t seed = 1;
  int cadence = 1;                  // record every k-th step
  bool disable_linear_flow = false;  // diagnostic mode: pure pointwise ODE
};

enum class RunStatus { completed, blown_up };

struct EvolutionTrace {
  std::vector<double> times;
  RVec mass;           // ||u||_2^2
  RVec lp1;            // ||u||_{p+1}^{p+1}
  RVec weighted_mass;  // F = ||u/w||_2^2
  RVec df_dt;          // centered differences of F over the recorded times
  RVec rhs_lower;      // b F^{(p+1)/2} - 2 a F
  RVec linf;
  RunStatus status = RunStatus::completed;
  double t_obs = 0.0;  // meaningful when blown_up
  double a_ode = 0.0;  // c_emp * sup(1/w) * windowed Besov sum of w
  double b_ode = 0.0;  // ||1/w||_2^{1-p}
  double q_ode = 0.0;  // (p+1)/2
  CVec final_state;
};

inline EvolutionTrace evolve(const SimulationConfig& cfg) {
  if (!(cfg.p > 1.0)) throw std::invalid_argument("p > 1 required");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(cfg.t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (!(cfg.blowup_threshold > 0.0))
    throw std::invalid_argument("blow-up threshold must be positive");
  if (!(cfg.weight_a > 0.5 && cfg.weight_a < 1.0))
    throw std::invalid_argument("weight exponent must lie in (1/2, 1)");
  if (cfg.cadence < 1) throw std::invalid_argument("cadence must be at least 1");
  require_field(cfg.grid, cfg.u0.size());

  const Grid& g = cfg.grid;
  CoefficientField coeff = make_coefficient(g, sample_coeff(g, cfg.coeff));
  if (!(coeff.c1 > 0.0)) throw std::invalid_argument("coefficient must be uniformly positive");
  PotentialField pot = make_potential(g, sample_pot(g, cfg.pot_singular),
                                      sample_pot(g, cfg.pot_bounded), cfg.lorentz_q, cfg.theta);
  EllipticOperator op = assemble(g, std::move(coeff), std::move(pot));
  SpectralData sd = eigendecompose(op);
  if (sd.lambda.front() < -1e-10 * std::max(std::fabs(sd.lambda.back()), 1e-300))
    throw NumericalError("operator form not nonnegative");

  const RVec w = bracket_weight(g, cfg.weight_a);
  RVec winv(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) winv[i] = 1.0 / w[i];
  const double inf = std::numeric_limits<double>::infinity();

  EvolutionTrace tr;
  tr.q_ode = 0.5 * (cfg.p + 1.0);
  tr.b_ode = std::pow(l2_norm(g, to_complex(winv)), 1.0 - cfg.p);
  tr.a_ode = cfg.c_emp * lebesgue_norm(g, winv, inf) * windowed_besov_b1(g, w);

  CVec u = cfg.u0;
  double t = 0.0;
  auto record = [&](double at) {
    tr.times.push_back(at);
    tr.mass.push_back(l2_norm(g, u) * l2_norm(g, u));
    tr.lp1.push_back(std::pow(lebesgue_norm(g, u, cfg.p + 1.0), cfg.p + 1.0));
    CVec v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] * winv[i];
    tr.weighted_mass.push_back(l2_norm(g, v) * l2_norm(g, v));
    tr.linf.push_back(lebesgue_norm(g, u, inf));
  };
  record(0.0);
  double last_recorded = 0.0;

  const double pm1 = cfg.p - 1.0;
  long steps = 0;
  const long step_budget = 5000000;
  while (t < cfg.t_max) {
    const double sup = lebesgue_norm(g, u, inf);
    if (sup > cfg.blowup_threshold) {
      tr.status = RunStatus::blown_up;
      break;
    }
    double dt_eff = cfg.dt;
    if (sup > 0.0)
      dt_eff = std::min(dt_eff, 0.1 / (pm1 * std::pow(sup, pm1)));
    dt_eff = std::min(dt_eff, cfg.t_max - t);
    if (!(dt_eff > 0.0)) break;

    bool blew = false;
    double in_step = 0.0;
    if (cfg.disable_linear_flow) {
      HalfStepResult a = nonlinear_half_step(u, 0.5 * dt_eff, cfg.p);
      if (a.blowup) {
        blew = true;
        in_step = a.singular_time;
      } else {
        HalfStepResult b = nonlinear_half_step(a.u, 0.5 * dt_eff, cfg.p);
        if (b.blowup) {
          blew = true;
          in_step = 0.5 * dt_eff + b.singular_time;
        } else {
          u = std::move(b.u);
        }
      }
    } else {
      StrangResult r = step_strang(u, dt_eff, sd, cfg.p);
      if (r.blowup) {
        blew = true;
        in_step = r.time_in_step;
      } else {
        u = std::move(r.u);
      }
    }
    if (blew) {
      tr.status = RunStatus::blown_up;
      tr.t_obs = t + in_step;
      break;
    }
    t += dt_eff;
    ++steps;
    if (steps % cfg.cadence == 0) {
      record(t);
      last_recorded = t;
    }
    const double sup_now = lebesgue_norm(g, u, inf);
    if (sup_now > cfg.blowup_threshold) {
      tr.status = RunStatus::blown_up;
      tr.t_obs = t - dt_eff;  // declared after the step; report the time before it
      break;
    }
    if (steps >= step_budget) throw NumericalError("evolve: step budget exhausted");
  }
  if (t != last_recorded) record(t);
  tr.final_state = std::move(u);

  const std::size_t rows = tr.times.size();
  tr.df_dt.assign(rows, 0.0);
  tr.rhs_lower.assign(rows, 0.0);
  for (std::size_t k = 0; k < rows; ++k) {
    if (rows >= 2) {
      const std::size_t lo = k == 0 ? 0 : k - 1;
      const std::size_t hi = k + 1 == rows ? k : k + 1;
      const double span = tr.times[hi] - tr.times[lo];
      if (span > 0.0)
        tr.df_dt[k] = (tr.weighted_mass[hi] - tr.weighted_mass[lo]) / span;
    }
    const double f = tr.weighted_mass[k];
    tr.rhs_lower[k] = tr.b_ode * std::pow(f, tr.q_ode) - 2.0 * tr.a_ode * f;
  }
  return tr;
}

struct InequalityAudit {
  int checked = 0;
  int satisfied = 0;
};

// Checks (1/2) dF/dt >= b F^q - a F - eps at every interior recorded time.
// eps combines a relative floor with a second-difference proxy for the
// centered-difference truncation error on the adaptive time grid.
inline InequalityAudit weighted_mass_inequality_audit(const EvolutionTrace& tr) {
  InequalityAudit audit;
  for (std::size_t k = 1; k + 1 < tr.times.size(); ++k) {
    const double f = tr.weighted_mass[k];
    const double bfq = tr.b_ode * std::pow(f, tr.q_ode);
    const double af = tr.a_ode * f;
    const double window = tr.times[k + 1] - tr.times[k - 1];
    if (!(window > 0.0)) continue;
    const double curv = std::fabs(tr.weighted_mass[k + 1] - 2.0 * tr.weighted_mass[k] +
                                  tr.weighted_mass[k - 1]) /
                        window;
    const double eps = 1e-6 * (bfq + af) + curv;
    ++audit.checked;
    if (0.5 * tr.df_dt[k] >= bfq - af - eps) ++audit.satisfied;
  }
  return audit;
}

struct ThresholdCertificate {
  double lhs = 0.0;  // ||w u0||_2^2
  double rhs = 0.0;  // (c ||1/w||_inf ||w||_B)^{2/(p-1)} ||1/w||_2^2
  double c_emp = 0.0;
  double a_ode = 0.0;
  double b_ode = 0.0;
  double q_ode = 0.0;
  double f0 = 0.0;  // ||u0/w||_2^2, the weighted mass the comparison ODE tracks
  bool predicted = false;
  std::optional<double> t_bound;
};

inline double certificate_rhs(double c_emp, double winv_inf, double w_besov, double winv_l2,
                              double p) {
  return std::pow(c_emp * winv_inf * w_besov, 2.0 / (p - 1.0)) * winv_l2 * winv_l2;
}

inline ThresholdCertificate threshold_certificate(const Grid& g, const CVec& u0, const RVec& w,
                                                  double p, double c_emp) {
  if (!(p > 1.0)) throw std::invalid_argument("p > 1 required");
  require_field(g, u0.size());
  require_field(g, w.size());
  for (double v : w)
    if (v == 0.0) throw std::invalid_argument("weight has a zero sample");

  RVec winv(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) winv[i] = 1.0 / w[i];
  const double inf = std::numeric_limits<double>::infinity();
  const double winv_inf = lebesgue_norm(g, winv, inf);
  const double winv_l2 = l2_norm(g, to_complex(winv));
  const double w_besov = windowed_besov_b1(g, w);

  CVec wu(u0.size()), vu(u0.size());
  for (std::size_t i = 0; i < u0.size(); ++i) {
    wu[i] = u0[i] * w[i];
    vu[i] = u0[i] * winv[i];
  }

  ThresholdCertificate cert;
  cert.c_emp = c_emp;
  cert.lhs = l2_norm(g, wu) * l2_norm(g, wu);
  cert.rhs = certificate_rhs(c_emp, winv_inf, w_besov, winv_l2, p);
  cert.predicted = cert.lhs >= cert.rhs;
  cert.a_ode = c_emp * winv_inf * w_besov;
  cert.b_ode = std::pow(winv_l2, 1.0 - p);
  cert.q_ode = 0.5 * (p + 1.0);
  cert.f0 = l2_norm(g, vu) * l2_norm(g, vu);
  if (cert.f0 > 0.0) {
    BlowupOde ode = make_blowup_ode(cert.a_ode, cert.b_ode, cert.q_ode, cert.f0);
    cert.t_bound = ode.t_bound;
  }
  return cert;
}

struct RescalingRow {
  double r = 0.0;
  double a_emp = 0.0;  // sup(1/w_R) * op_norm([w_R, D]) on the enlarged domain
  double b = 0.0;      // R^{-(p-1)/2} ||1/w||_2^{1-p} from the base profile
  double ratio = 0.0;
};

struct RescalingScan {
  std::vector<RescalingRow> rows;
  double slope = 0.0;  // least-squares slope of log ratio against log R
};

// Dilates the weight profile as w_R(x) = w(x/R) by enlarging the domain at
// fixed grid spacing and measures how the commutator constant decays against
// the rescaled ODE coefficient.
inline RescalingScan rescaling_scan(const std::function<double(double)>& w_profile,
                                    const Grid& base, const std::vector<double>& r_list,
                                    double p) {
  if (r_list.size() < 3)
    throw std::invalid_argument("rescaling scan needs at least 3 scales for a slope fit");
  if (!(p > 1.0 && p <= 3.0)) throw std::invalid_argument("rescaling scan requires p in (1, 3]");
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    if (!(r_list[i] > 0.0)) throw std::invalid_argument("scales must be positive");
    if (i > 0 && !(r_list[i] > r_list[i - 1]))
      throw std::invalid_argument("scales must increase");
  }

  const RVec w0 = sample(base, [&](double x) { return w_profile(x); });
  for (double v : w0)
    if (v == 0.0) throw std::invalid_argument("weight profile has a zero sample");
  RVec winv0(w0.size());
  for (std::size_t i = 0; i < w0.size(); ++i) winv0[i] = 1.0 / w0[i];
  const double winv_l2 = l2_norm(base, to_complex(winv0));

  const CoeffSpec unit{CoeffKind::constant, 1.0, 0.0, 1, 16, 1};
  const PotSpec none{PotKind::zero, 0.0, 100.0, 3.0, 32, 1};

  RescalingScan scan;
  for (double r : r_list) {
    const int n_r = static_cast<int>(std::lround(base.n * r));
    const Grid g = Grid::make(n_r, base.length * r);
    HalfOrderSetup s = make_half_order(g, unit, none, none, 3.0, 0.5);
    const RVec w_r = sample(g, [&](double x) { return w_profile(x / r); });
    double winv_inf = 0.0;
    for (double v : w_r) {
      if (v == 0.0) throw std::invalid_argument("weight profile has a zero sample");
      winv_inf = std::max(winv_inf, 1.0 / std::fabs(v));
    }
    RescalingRow row;
    row.r = r;
    row.a_emp = winv_inf * operator_norm(commutator_matrix(w_r, s.d), 1e-9);
    row.b = std::pow(r, -0.5 * (p - 1.0)) * std::pow(winv_l2, 1.0 - p);
    row.ratio = row.a_emp / row.b;
    scan.rows.push_back(row);
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(scan.rows.size());
  for (const RescalingRow& row : scan.rows) {
    const double x = std::log(row.r);
    const double y = std::log(row.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  scan.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return scan;
}

}  // namespace hglk
