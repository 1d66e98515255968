// Dyadic band decomposition: cutoff profile, projector bank, Besov sums,
// second-difference norms, and the weight scans built on top of them.
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hglk/besov.hpp"
#include "hglk/rng.hpp"

using namespace hglk;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST(CutoffProfile, PinnedValues) {
  EXPECT_DOUBLE_EQ(chi0(0.0), 1.0);
  EXPECT_DOUBLE_EQ(chi0(1.0), 1.0);
  EXPECT_NEAR(chi0(1.5), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(chi0(2.0), 0.0);
  EXPECT_DOUBLE_EQ(chi0(5.0), 0.0);
  EXPECT_GT(chi0(1.2), chi0(1.8));
  EXPECT_DOUBLE_EQ(chi0(-0.5), 1.0);  // radial profile
}

TEST(Bank, IndexRangeSmallAndLargeDomains) {
  DyadicBank b1 = make_bank(Grid::make(64, 2.0 * pi));
  EXPECT_EQ(b1.j_min, 0);  // fundamental frequency 1
  EXPECT_EQ(b1.j_max, 5);  // Nyquist 32
  DyadicBank b2 = make_bank(Grid::make(8192, 512.0));  // h = 1/16
  EXPECT_EQ(b2.j_min, -7);
  EXPECT_EQ(b2.j_max, 6);
}

TEST(Bank, TelescopingPartitionOfUnity) {
  Grid g = Grid::make(256, 37.5);
  DyadicBank bank = make_bank(g);
  for (int k = 0; k < g.n; ++k) {
    double inhom = bank.lowpass[k];
    for (int j = 1; j <= bank.j_max; ++j) inhom += bank.band(j)[k];
    EXPECT_NEAR(inhom, 1.0, 1e-12) << "bin " << k;
    if (k != 0) {
      double hom = 0.0;
      for (int j = bank.j_min; j <= bank.j_max; ++j) hom += bank.band(j)[k];
      EXPECT_NEAR(hom, 1.0, 1e-12) << "bin " << k;
    }
  }
}

TEST(Bank, BandsSupportedInDyadicAnnuli) {
  Grid g = Grid::make(128, 16.0);
  DyadicBank bank = make_bank(g);
  for (int j = bank.j_min; j <= bank.j_max; ++j) {
    const RVec& m = bank.band(j);
    const double lo = std::pow(2.0, j - 1);
    const double hi = std::pow(2.0, j + 1);
    for (int k = 0; k < g.n; ++k) {
      const double r = std::fabs(g.xi(k));
      if (r < lo || r > hi) {
        EXPECT_EQ(m[k], 0.0) << "j=" << j << " k=" << k;
      }
    }
  }
}

TEST(Project, ConstantKilledByBandsKeptByLowpass) {
  Grid g = Grid::make(64, 7.0);
  DyadicBank bank = make_bank(g);
  CVec one(g.n, cplx(1.0, 0.0));
  for (int j = bank.j_min; j <= bank.j_max; ++j)
    EXPECT_LE(lebesgue_norm(g, project(bank, one, j), kInf), 1e-13);
  CVec q = project_lowpass(bank, one);
  for (int i = 0; i < g.n; ++i) EXPECT_NEAR(q[i].real(), 1.0, 1e-13);
}

TEST(Project, SingleModeLandsInOneBand) {
  Grid g = Grid::make(64, 2.0 * pi);
  DyadicBank bank = make_bank(g);
  CVec f = csample(g, [](double x) { return cplx(std::cos(4.0 * x), 0.0); });
  CVec p2 = project(bank, f, 2);
  for (int i = 0; i < g.n; ++i) EXPECT_NEAR(std::abs(p2[i] - f[i]), 0.0, 1e-12);
  for (int j = bank.j_min; j <= bank.j_max; ++j) {
    if (j == 2) continue;
    EXPECT_LE(lebesgue_norm(g, project(bank, f, j), kInf), 1e-12) << j;
  }
  EXPECT_LE(lebesgue_norm(g, project_lowpass(bank, f), kInf), 1e-12);
}

TEST(Project, RejectsOutOfRangeBand) {
  Grid g = Grid::make(32, 4.0);
  DyadicBank bank = make_bank(g);
  CVec f(g.n, cplx(0.0, 0.0));
  EXPECT_THROW(project(bank, f, bank.j_min - 1), std::invalid_argument);
  EXPECT_THROW(project(bank, f, bank.j_max + 1), std::invalid_argument);
}

TEST(Project, TelescopingOnRandomFields) {
  Grid g = Grid::make(64, 11.0);
  DyadicBank bank = make_bank(g);
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    CVec f = random_complex_field(g, rng);
    CVec acc = project_lowpass(bank, f);
    for (int j = 1; j <= bank.j_max; ++j) {
      CVec pj = project(bank, f, j);
      for (int i = 0; i < g.n; ++i) acc[i] += pj[i];
    }
    double sup = lebesgue_norm(g, f, kInf);
    for (int i = 0; i < g.n; ++i)
      ASSERT_LE(std::abs(acc[i] - f[i]), 1e-12 * sup);
  }
}

TEST(Projectors, DisjointBandsComposeToZero) {
  Grid g = Grid::make(128, 10.0);
  DyadicBank bank = make_bank(g);
  for (int j = bank.j_min; j <= bank.j_max; ++j) {
    for (int k = bank.j_min; k <= bank.j_max; ++k) {
      if (std::abs(j - k) < 2) continue;
      const RVec& mj = bank.band(j);
      const RVec& mk = bank.band(k);
      for (int b = 0; b < g.n; ++b) EXPECT_EQ(mj[b] * mk[b], 0.0);
    }
  }
  Rng rng(5);
  CVec f = random_complex_field(g, rng);
  double sup = lebesgue_norm(g, f, kInf);
  CVec chained = project(bank, project(bank, f, bank.j_min), bank.j_min + 2);
  EXPECT_LE(lebesgue_norm(g, chained, kInf), 1e-12 * sup);
}

TEST(Bernstein, GradientBoundOnEveryBand) {
  Grid g = Grid::make(128, 19.0);
  DyadicBank bank = make_bank(g);
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    CVec f = random_complex_field(g, rng);
    for (int j = bank.j_min; j <= bank.j_max; ++j) {
      CVec pj = project(bank, f, j);
      double sup = lebesgue_norm(g, pj, kInf);
      if (sup == 0.0) continue;
      double dsup = lebesgue_norm(g, spectral_derivative(g, pj), kInf);
      ASSERT_LE(dsup, 4.0 * std::pow(2.0, j) * sup * (1.0 + 1e-12))
          << "trial " << trial << " band " << j;
    }
  }
}

TEST(BesovNorm, ConstantField) {
  Grid g = Grid::make(64, 9.0);
  DyadicBank bank = make_bank(g);
  CVec one(g.n, cplx(1.0, 0.0));
  BesovReport hom = besov_norm(bank, one, 1.0, kInf, 1.0, true);
  EXPECT_NEAR(hom.value, 0.0, 1e-12);
  BesovReport inhom = besov_norm(bank, one, 1.0, kInf, 1.0, false);
  EXPECT_NEAR(inhom.value, 1.0, 1e-12);
  EXPECT_NEAR(inhom.lowpass, 1.0, 1e-12);
}

TEST(BesovNorm, SingleModeValueFour) {
  Grid g = Grid::make(64, 2.0 * pi);
  DyadicBank bank = make_bank(g);
  CVec f = csample(g, [](double x) { return cplx(std::cos(4.0 * x), 0.0); });
  BesovReport hom = besov_norm(bank, f, 1.0, kInf, 1.0, true);
  EXPECT_NEAR(hom.value, 4.0, 1e-9);
  for (std::size_t i = 0; i < hom.js.size(); ++i) {
    if (hom.js[i] == 2)
      EXPECT_NEAR(hom.terms[i], 4.0, 1e-9);
    else
      EXPECT_LE(hom.terms[i], 1e-9);
  }
  BesovReport inhom = besov_norm(bank, f, 1.0, kInf, 1.0, false);
  EXPECT_NEAR(inhom.value, 4.0, 1e-9);
  EXPECT_LE(inhom.lowpass, 1e-12);
}

TEST(BesovNorm, ReportContract) {
  Grid g = Grid::make(128, 13.0);
  DyadicBank bank = make_bank(g);
  Rng rng(99);
  CVec f = random_complex_field(g, rng);

  BesovReport hom = besov_norm(bank, f, 1.0, kInf, 1.0, true);
  double total = 0.0;
  for (double b : hom.terms) {
    EXPECT_GE(b, 0.0);
    total += b;
  }
  EXPECT_NEAR(hom.value, total, 1e-12 * (1.0 + total));
  ASSERT_EQ(hom.partial_sums.size(), hom.terms.size());
  for (std::size_t i = 1; i < hom.partial_sums.size(); ++i)
    EXPECT_GE(hom.partial_sums[i], hom.partial_sums[i - 1] - 1e-15);
  EXPECT_NEAR(hom.partial_sums.back(), hom.value, 1e-12 * (1.0 + total));

  BesovReport inhom = besov_norm(bank, f, 0.5, kInf, 1.0, false);
  double itotal = inhom.lowpass;
  for (double b : inhom.terms) itotal += b;
  EXPECT_NEAR(inhom.value, itotal, 1e-12 * (1.0 + itotal));
}

TEST(BesovNorm, SobolevCrossCheckTwoTwo) {
  Grid g = Grid::make(128, 21.0);
  DyadicBank bank = make_bank(g);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    CVec f = random_complex_field(g, rng);
    // remove the mean so the homogeneous ladder sees the whole field
    cplx mean(0.0, 0.0);
    for (const auto& z : f) mean += z;
    mean /= static_cast<double>(g.n);
    for (auto& z : f) z -= mean;

    double l2 = l2_norm(g, f);
    BesovReport sq = besov_norm(bank, f, 0.0, 2.0, 2.0, true);
    EXPECT_LE(sq.value, l2 * (1.0 + 1e-9));
    EXPECT_GE(sq.value, l2 / std::sqrt(2.0) * (1.0 - 1e-9));

    double hs = sobolev_norm(g, f, 1.0, true);
    BesovReport b122 = besov_norm(bank, f, 1.0, 2.0, 2.0, true);
    EXPECT_LE(b122.value, 2.0 * hs * (1.0 + 1e-9));
    EXPECT_GE(b122.value, hs / (2.0 * std::sqrt(2.0)) * (1.0 - 1e-9));
  }
}

TEST(SecondDifference, LinearProfileVanishesAwayFromSeam) {
  Grid g = Grid::make(64, 64.0);  // h = 1, integer samples: exact arithmetic
  RVec f = sample(g, [](double x) { return x; });
  RVec d = shifted_second_difference(g, f, 3);
  for (int i = 3; i < g.n - 3; ++i) EXPECT_EQ(d[i], 0.0) << i;
  EXPECT_NE(d[0], 0.0);
}

TEST(SecondDifference, WeightIntegrandDominatesTOverEight) {
  Grid g = Grid::make(4096, 256.0);  // h = 1/16, seam far from the origin
  RVec w = sample(g, [](double x) { return std::sqrt(1.0 + x * x); });
  for (double t : log_spaced(1.0, 64.0, 25))
    EXPECT_GE(second_difference_integrand(g, w, t), t / 8.0) << t;
}

TEST(SecondDifference, WeightNormGrowsLogarithmically) {
  Grid g = Grid::make(4096, 256.0);
  RVec w = sample(g, [](double x) { return std::sqrt(1.0 + x * x); });
  double v64 = second_difference_norm(g, w, log_spaced(0.5, 64.0, 80));
  double v4 = second_difference_norm(g, w, log_spaced(0.5, 4.0, 30));
  EXPECT_GE(v64, std::log(64.0) / 8.0);
  EXPECT_GE(v64 - v4, std::log(16.0) / 8.0);
}

TEST(SecondDifference, RejectsBadShiftGrids) {
  Grid g = Grid::make(64, 16.0);  // h = 0.25
  RVec f = sample(g, [](double x) { return x * x; });
  EXPECT_THROW(second_difference_norm(g, f, RVec{}), std::invalid_argument);
  EXPECT_THROW(second_difference_norm(g, f, RVec{0.1}), std::invalid_argument);
  EXPECT_THROW(second_difference_norm(g, f, RVec{9.0}), std::invalid_argument);
  EXPECT_THROW(second_difference_norm(g, f, RVec{2.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(second_difference_integrand(g, f, 0.25), std::invalid_argument);
}

TEST(WeightScan, FlatWeightIsConvergentZero) {
  auto rows = weight_scan({0.0}, {64.0});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].verdict, "convergent");
  EXPECT_NEAR(rows[0].besov_windowed, 0.0, 1e-12);
  EXPECT_NEAR(rows[0].besov_full, 0.0, 1e-12);
}

TEST(WeightScan, SubcriticalWeightConverges) {
  auto rows = weight_scan({0.7}, {64.0, 128.0, 256.0, 512.0});
  ASSERT_EQ(rows.size(), 4u);
  const WeightScanRow& last = rows.back();
  EXPECT_EQ(last.verdict, "convergent");
  EXPECT_LE(last.tail_ratio, 0.05);
  // The full-period value stabilizes across the octave ladder. The windowed
  // value instead keeps growing by geometrically decaying increments; check
  // the decay factor so the convergence mechanism itself is pinned.
  EXPECT_LE(std::fabs(rows[3].besov_full - rows[0].besov_full) / rows[3].besov_full,
            0.05);
  double inc1 = rows[1].besov_windowed - rows[0].besov_windowed;
  double inc3 = rows[3].besov_windowed - rows[2].besov_windowed;
  ASSERT_GT(inc1, 0.0);
  EXPECT_LE(inc3 / inc1, 0.75);  // two octaves of ~2^{-(1-a)} decay
}

TEST(WeightScan, CriticalWeightDivergentTrend) {
  auto rows = weight_scan({1.0}, {64.0, 128.0, 256.0, 512.0});
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int new_bands = rows[i - 1].j_min - rows[i].j_min;
    ASSERT_GE(new_bands, 1);
    EXPECT_GE(rows[i].besov_windowed - rows[i - 1].besov_windowed,
              0.05 * new_bands)
        << "octave " << i;
  }
  EXPECT_EQ(rows.back().verdict, "divergent-trend");
}

TEST(WeightScan, BandSlopesMatchTheTwoRegimes) {
  auto rows = weight_scan({0.7}, {512.0});
  ASSERT_EQ(rows.size(), 1u);
  const std::vector<WeightBandRow>& bands = rows[0].bands;
  ASSERT_GE(bands.size(), 8u);
  std::size_t knee = 0;
  for (std::size_t i = 1; i < bands.size(); ++i)
    if (bands[i].b_j > bands[knee].b_j) knee = i;
  ASSERT_GE(knee, 4u);
  // The two bands at the fundamental hold only a couple of discrete modes and
  // the bands near Nyquist are roundoff; judge slopes between those regimes.
  const double floor = 1e-6 * rows[0].besov_windowed;
  const double a = 0.7;
  int low_checked = 0;
  int high_checked = 0;
  for (std::size_t i = 2; i + 1 < bands.size(); ++i) {
    if (bands[i].b_j <= floor || bands[i + 1].b_j <= floor) continue;
    const double slope = std::log2(bands[i + 1].b_j / bands[i].b_j);
    if (i + 2 <= knee) {
      EXPECT_GE(slope, (1.0 - a) / 2.0 - 0.1) << "low band " << bands[i].j;
      ++low_checked;
    }
    if (i >= knee + 2) {
      EXPECT_LE(slope, -0.5) << "high band " << bands[i].j;
      ++high_checked;
    }
  }
  EXPECT_GE(low_checked, 3);
  EXPECT_GE(high_checked, 2);
}

TEST(WeightScan, CsvHasPinnedColumnsAndRowPerBand) {
  auto rows = weight_scan({0.0, 0.7}, {64.0});
  std::string csv = weight_scan_csv(rows);
  std::istringstream in(csv);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "a,L,j,b_j,partial_sum,verdict");
  std::size_t data_lines = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++data_lines;
  std::size_t expect = 0;
  for (const auto& r : rows) expect += r.bands.size();
  EXPECT_EQ(data_lines, expect);
}

TEST(WeightScan, RejectsBadArguments) {
  EXPECT_THROW(weight_scan({-0.1}, {64.0}), std::invalid_argument);
  EXPECT_THROW(weight_scan({1.2}, {64.0}), std::invalid_argument);
  EXPECT_THROW(weight_scan({0.5}, {128.0, 64.0}), std::invalid_argument);
  EXPECT_THROW(weight_scan({0.5}, {}), std::invalid_argument);
}
