#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hglk/eig.hpp"
#include "hglk/elliptic.hpp"
#include "hglk/families.hpp"
#include "hglk/rng.hpp"

using namespace hglk;

namespace {

PotentialField zero_potential(const Grid& g, double q = 2.5, double theta = 0.5) {
  return make_potential(g, RVec(g.n, 0.0), RVec(g.n, 0.0), q, theta);
}

CoefficientField rough_coeff(const Grid& g, std::uint64_t seed) {
  CoeffSpec spec;
  spec.kind = CoeffKind::random_lipschitz;
  spec.base = 1.0;
  spec.amplitude = 0.4;
  spec.knots = 12;
  spec.seed = seed;
  return make_coefficient(g, sample_coeff(g, spec));
}

}  // namespace

TEST(Assemble, ConstantCoefficientStencil) {
  Grid g = Grid::make(4, 4.0);  // h = 1
  EllipticOperator op = assemble(g, make_coefficient(g, RVec(4, 1.0)), zero_potential(g));
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(op.matrix.at(i, i), 2.0);
    EXPECT_DOUBLE_EQ(op.matrix.at(i, (i + 1) % 4), -1.0);
    EXPECT_DOUBLE_EQ(op.matrix.at(i, (i + 3) % 4), -1.0);
    EXPECT_DOUBLE_EQ(op.matrix.at(i, (i + 2) % 4), 0.0);
  }
}

TEST(Assemble, ConstantPotentialShiftsDiagonal) {
  Grid g = Grid::make(4, 4.0);
  PotentialField pot = make_potential(g, RVec(4, 0.0), RVec(4, 5.0), 2.5, 0.5);
  EllipticOperator op = assemble(g, make_coefficient(g, RVec(4, 1.0)), pot);
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(op.matrix.at(i, i), 7.0);
    EXPECT_DOUBLE_EQ(op.matrix.at(i, (i + 1) % 4), -1.0);
  }
}

TEST(Assemble, BondAveragedVaryingCoefficient) {
  // a = (1,2,1,2), h = 1: every bond average is 1.5.
  Grid g = Grid::make(4, 4.0);
  EllipticOperator op = assemble(g, make_coefficient(g, RVec{1.0, 2.0, 1.0, 2.0}), zero_potential(g));
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(op.matrix.at(i, (i + 1) % 4), -1.5);
    EXPECT_DOUBLE_EQ(op.matrix.at(i, (i + 3) % 4), -1.5);
    EXPECT_DOUBLE_EQ(op.matrix.at(i, i), 3.0);
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += op.matrix.at(i, j);
    EXPECT_DOUBLE_EQ(row, 0.0);
  }
}

TEST(Assemble, ExactSymmetryAndNearKernelConstants) {
  Grid g = Grid::make(128, 10.0);
  EllipticOperator op = assemble(g, rough_coeff(g, 99), zero_potential(g));
  double asym = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) asym = std::max(asym, std::abs(op.matrix.at(i, j) - op.matrix.at(j, i)));
  EXPECT_EQ(asym, 0.0);  // bitwise, by bond-array construction

  // The flux-form application annihilates constants exactly.
  CVec ones(g.n, cplx(1.0, 0.0));
  CVec flux = apply_flux_form(g, op.coeff.a, RVec(g.n, 0.0), ones);
  for (const auto& z : flux) {
    EXPECT_EQ(z.real(), 0.0);
    EXPECT_EQ(z.imag(), 0.0);
  }
  // The assembled matrix annihilates constants to rounding.
  CVec mv = matvec(op.matrix, ones);
  double scale = max_abs(op.matrix);
  for (const auto& z : mv) EXPECT_LE(std::abs(z), 1e-13 * scale);
}

TEST(Assemble, RejectsGridMismatch) {
  Grid g = Grid::make(8, 1.0);
  Grid g2 = Grid::make(16, 1.0);
  CoefficientField c = make_coefficient(g, RVec(8, 1.0));
  PotentialField p = zero_potential(g2);
  EXPECT_THROW(assemble(g, c, p), std::invalid_argument);
}

TEST(CheckEllipticity, SinusoidalRange) {
  Grid g = Grid::make(256, 8.0);
  CoeffSpec spec;
  spec.kind = CoeffKind::sinusoidal;
  spec.base = 1.0;
  spec.amplitude = 0.5;
  spec.waves = 1;
  CoefficientField c = make_coefficient(g, sample_coeff(g, spec));
  auto rep = check_ellipticity(c);
  EXPECT_NEAR(rep.c1, 0.5, 1e-12);
  EXPECT_NEAR(rep.c2, 1.5, 1e-12);
  EXPECT_TRUE(rep.pass);
}

TEST(CheckEllipticity, ConstantAndNegativeSample) {
  Grid g = Grid::make(8, 1.0);
  auto rep = check_ellipticity(make_coefficient(g, RVec(8, 1.0)));
  EXPECT_DOUBLE_EQ(rep.c1, 1.0);
  EXPECT_DOUBLE_EQ(rep.c2, 1.0);
  EXPECT_TRUE(rep.pass);

  RVec bad(8, 1.0);
  bad[3] = -0.1;
  EXPECT_FALSE(check_ellipticity(make_coefficient(g, bad)).pass);
}

TEST(CheckA3, ConstantCoefficientGivesZero) {
  Grid g = Grid::make(64, 2.0 * pi);
  auto rep = check_a3(g, RVec(g.n, 1.0), 10, 42);
  EXPECT_LE(rep.max_ratio, 1e-12);
}

TEST(CheckA3, CosineTimesCosineHandValue) {
  // a = f = cos(x) on [-pi,pi): ratio = ||cos^2||_2 / ||cos||_2 = sqrt(3)/2.
  Grid g = Grid::make(64, 2.0 * pi);
  RVec a = sample(g, [](double x) { return std::cos(x); });
  CVec f = csample(g, [](double x) { return cplx(std::cos(x), 0.0); });
  double ratio = a3_ratio(g, a, f);
  EXPECT_NEAR(ratio, std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(CheckA3, SeededReproducibility) {
  Grid g = Grid::make(64, 5.0);
  CoefficientField c = rough_coeff(g, 7);
  auto r1 = check_a3(g, c.a, 25, 1234);
  auto r2 = check_a3(g, c.a, 25, 1234);
  EXPECT_EQ(r1.max_ratio, r2.max_ratio);  // bit-for-bit
  EXPECT_TRUE(std::isfinite(r1.max_ratio));
  EXPECT_GT(r1.max_ratio, 0.0);
}

TEST(FormPositivity, ZeroPotentialPasses) {
  Grid g = Grid::make(32, 4.0);
  EllipticOperator op = assemble(g, rough_coeff(g, 3), zero_potential(g, 2.5, 0.3));
  auto rep = check_form_positivity(op);
  EXPECT_NEAR(rep.min_eigenvalue, 0.0, 1e-10);
  EXPECT_TRUE(rep.pass);
  EXPECT_DOUBLE_EQ(rep.theta, 0.3);
}

TEST(FormPositivity, PositiveConstantPotential) {
  Grid g = Grid::make(32, 4.0);
  PotentialField pot = make_potential(g, RVec(g.n, 0.0), RVec(g.n, 1.0), 2.5, 0.5);
  EllipticOperator op = assemble(g, make_coefficient(g, RVec(g.n, 1.0)), pot);
  auto rep = check_form_positivity(op);
  EXPECT_GE(rep.min_eigenvalue, 1.0 - 1e-10);
  EXPECT_TRUE(rep.pass);
}

TEST(FormPositivity, DeepWellFails) {
  Grid g = Grid::make(64, 4.0);
  PotentialField pot = make_potential(g, RVec(g.n, 0.0), RVec(g.n, -1e6), 2.5, 0.5);
  EllipticOperator op = assemble(g, make_coefficient(g, RVec(g.n, 1.0)), pot);
  EXPECT_FALSE(check_form_positivity(op).pass);
}

TEST(LorentzQuasinorm, PinnedEnumeration) {
  Grid g = Grid::make(4, 4.0);  // h = 1
  EXPECT_DOUBLE_EQ(lorentz_quasinorm(g, RVec{3.0, 1.0, 0.0, 0.0}, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(lorentz_quasinorm(g, RVec(4, 0.0), 2.0), 0.0);
  // Constant c: c * (h*n)^{1/q}.
  Grid g2 = Grid::make(8, 2.0);  // total measure 2
  double q = 3.0;
  EXPECT_NEAR(lorentz_quasinorm(g2, RVec(8, 1.5), q), 1.5 * std::pow(2.0, 1.0 / q), 1e-14);
}

TEST(LorentzQuasinorm, StoredOnPotentialField) {
  Grid g = Grid::make(4, 4.0);
  PotentialField pot = make_potential(g, RVec{3.0, 1.0, 0.0, 0.0}, RVec{0.0, 0.0, 0.5, 0.0}, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(pot.lorentz_norm, 3.0);
  EXPECT_DOUBLE_EQ(pot.bounded_norm, 0.5);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(pot.v[i], pot.v_singular[i] + pot.v_bounded[i]);
}

TEST(SobolevEquivalence, LowFrequencyWindow) {
  // a=1, v=0, spectrum limited to |xi| h <= 0.5: ratio within [0.8, 1.1].
  Grid g = Grid::make(64, 2.0 * pi);
  EllipticOperator op = assemble(g, make_coefficient(g, RVec(g.n, 1.0)), zero_potential(g));
  auto rep = sobolev_equivalence_report(op, 50, 2024, 5);
  EXPECT_GE(rep.ratio_min, 0.8);
  EXPECT_LE(rep.ratio_max, 1.1);
  EXPECT_GE(rep.form_ratio_min, 0.9);
  EXPECT_LE(rep.form_ratio_max, 1.0 + 1e-9);
}

TEST(SobolevEquivalence, ConstantFieldRatioOne) {
  Grid g = Grid::make(32, 4.0);
  EllipticOperator op = assemble(g, make_coefficient(g, RVec(g.n, 1.0)), zero_potential(g));
  CVec ones(g.n, cplx(1.0, 0.0));
  EXPECT_NEAR(h2_equivalence_ratio(op, ones), 1.0, 1e-12);
}

TEST(SobolevEquivalence, SeededReproducibility) {
  Grid g = Grid::make(64, 7.0);
  EllipticOperator op = assemble(g, rough_coeff(g, 5), zero_potential(g));
  auto r1 = sobolev_equivalence_report(op, 20, 77, 0);
  auto r2 = sobolev_equivalence_report(op, 20, 77, 0);
  EXPECT_EQ(r1.ratio_min, r2.ratio_min);
  EXPECT_EQ(r1.ratio_max, r2.ratio_max);
  EXPECT_GT(r1.ratio_min, 0.0);
}

TEST(EllipticInvariants, GershgorinDiscsContainSpectrum) {
  Grid g = Grid::make(64, 6.0);
  PotentialField pot = make_potential(g, sample_pot(g, PotSpec{PotKind::inverse_power, 0.0, 20.0, 3.0, 0, 1}),
                                      RVec(g.n, 0.0), 3.0, 0.5);
  EllipticOperator op = assemble(g, rough_coeff(g, 21), pot);
  EigResult eig = symmetric_eigen(op.matrix);
  const double tol = 1e-10 * max_abs(op.matrix);
  for (double lam : eig.lambda) {
    bool inside = false;
    for (int i = 0; i < g.n && !inside; ++i) {
      double radius = 0.0;
      for (int j = 0; j < g.n; ++j)
        if (j != i) radius += std::abs(op.matrix.at(i, j));
      inside = std::abs(lam - op.matrix.at(i, i)) <= radius + tol;
    }
    EXPECT_TRUE(inside);
  }
}

TEST(EllipticInvariants, KineticPartNonnegative) {
  Grid g = Grid::make(128, 9.0);
  EllipticOperator op = assemble(g, rough_coeff(g, 13), zero_potential(g));
  EigResult eig = symmetric_eigen(op.matrix);
  double norm_inf = 0.0;
  for (int i = 0; i < g.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < g.n; ++j) row += std::abs(op.matrix.at(i, j));
    norm_inf = std::max(norm_inf, row);
  }
  EXPECT_GE(eig.lambda.front(), -1e-12 * norm_inf);
}

TEST(EllipticInvariants, QuadraticFormSandwich) {
  // c1 <-Delta_h f, f> <= <H_{A,0} f, f> <= c2 <-Delta_h f, f>, 100 random f.
  Grid g = Grid::make(64, 5.0);
  CoefficientField c = rough_coeff(g, 31);
  EllipticOperator op = assemble(g, c, zero_potential(g));
  EllipticOperator lap = assemble(g, make_coefficient(g, RVec(g.n, 1.0)), zero_potential(g));
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    CVec f = random_complex_field(g, rng);
    double qa = inner_product(g, matvec(op.matrix, f), f).real();
    double ql = inner_product(g, matvec(lap.matrix, f), f).real();
    double slack = 1e-10 * std::max(1.0, std::abs(ql));
    EXPECT_GE(qa, c.c1 * ql - slack);
    EXPECT_LE(qa, c.c2 * ql + slack);
  }
}

TEST(EllipticInvariants, HardyTypeBoundStableUnderRefinement) {
  // <|v| f, f> <= K ||f||^2 with the Sobolev index s = 1/(2q); K within
  // factor 2 across n -> 2n for the truncated inverse-power family.
  const double q = 3.0;
  const double s = 1.0 / (2.0 * q);
  PotSpec vs{PotKind::inverse_power, 0.0, 50.0, q, 0, 1};
  auto worst_ratio = [&](int n) {
    Grid g = Grid::make(n, 16.0);
    RVec v = sample_pot(g, vs);
    Rng rng(606);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      RVec f = random_band_limited_real(g, 8, rng);
      CVec fc = to_complex(f);
      double num = 0.0;
      for (int i = 0; i < g.n; ++i) num += std::abs(v[i]) * std::norm(fc[i]);
      num *= g.h();
      double den = sobolev_norm(g, fc, s, true);
      worst = std::max(worst, num / (den * den));
    }
    return worst;
  };
  double k1 = worst_ratio(128);
  double k2 = worst_ratio(256);
  EXPECT_TRUE(std::isfinite(k1));
  EXPECT_LE(k2, 2.0 * k1);
  EXPECT_LE(k1, 2.0 * k2);
}

TEST(Families, LipschitzSeminormFiniteAndPositive) {
  Grid g = Grid::make(256, 8.0);
  CoefficientField c = rough_coeff(g, 17);
  EXPECT_GT(c.lip, 0.0);
  EXPECT_TRUE(std::isfinite(c.lip));
  EXPECT_GT(c.c1, 0.0);
  // Piecewise-linear family: refinement does not inflate the Lipschitz seminorm.
  Grid g2 = Grid::make(512, 8.0);
  CoeffSpec spec;
  spec.kind = CoeffKind::random_lipschitz;
  spec.base = 1.0;
  spec.amplitude = 0.4;
  spec.knots = 12;
  spec.seed = 17;
  CoefficientField c2 = make_coefficient(g2, sample_coeff(g2, spec));
  EXPECT_LE(c2.lip, c.lip * 1.5 + 1e-12);
}

TEST(Families, InversePowerTruncation) {
  Grid g = Grid::make(64, 16.0);
  RVec v = sample_pot(g, PotSpec{PotKind::inverse_power, 0.0, 10.0, 2.5, 0, 1});
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, x);
  EXPECT_LE(vmax, 10.0 + 1e-15);
  EXPECT_GT(vmax, 1.0);  // cap active near the origin
  for (double x : v) EXPECT_GE(x, 0.0);
}
