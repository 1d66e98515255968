#pragma once
// Comparison ODE f' = -a f + b f^q for the weighted-mass lower bound: closed
// form, blow-up horizon, and the threshold at f0 = (a/b)^{1/(q-1)}.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace hglk {

struct BlowupOde {
  double a = 0.0;
  double b = 0.0;
  double q = 0.0;
  double f0 = 0.0;
  std::optional<double> t_bound;  // defined iff f0 > (a/b)^{1/(q-1)}
};

inline BlowupOde make_blowup_ode(double a, double b, double q, double f0) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ode coefficients must be positive");
  if (!(q > 1.0)) throw std::invalid_argument("ode exponent must exceed 1");
  if (!(f0 > 0.0)) throw std::invalid_argument("ode initial value must be positive");
  BlowupOde ode;
  ode.a = a;
  ode.b = b;
  ode.q = q;
  ode.f0 = f0;
  // t_bound = -ln(1 - (a/b) f0^{1-q}) / (a (q-1)); the log1p form keeps it
  // accurate when a/b * f0^{1-q} is tiny.
  const double x = (a / b) * std::pow(f0, 1.0 - q);
  if (x < 1.0) ode.t_bound = -std::log1p(-x) / (a * (q - 1.0));
  return ode;
}

// f(t) = e^{-at} (f0^{1-q} + (b/a)(e^{-a(q-1)t} - 1))^{-1/(q-1)}, exact for
// f' = -a f + b f^q. The expm1 form is stable for small a(q-1)t.
inline double ode_closed_form(const BlowupOde& ode, double t) {
  if (ode.t_bound && !(t < *ode.t_bound))
    throw std::invalid_argument("ode_closed_form: past blow-up bound");
  const double qm1 = ode.q - 1.0;
  const double bracket =
      std::pow(ode.f0, -qm1) + (ode.b / ode.a) * std::expm1(-ode.a * qm1 * t);
  return std::exp(-ode.a * t) * std::pow(bracket, -1.0 / qm1);
}

}  // namespace hglk
