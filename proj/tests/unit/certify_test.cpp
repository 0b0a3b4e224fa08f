#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "contamix/certify.hpp"
#include "contamix/error.hpp"

using namespace contamix;

namespace {

std::vector<Kernel> all_kernels() {
  return {Kernel::gaussian(), Kernel::laplace(), Kernel::cauchy(), Kernel::skew_gaussian(10.0)};
}

Kernel doubled_quadrature(const Kernel& k) {
  QuadratureSpec spec = k.quadrature();
  spec.panels *= 2;
  return k.with_quadrature(spec);
}

}  // namespace

TEST(Kappa, GaussianSmallShiftLimit) {
  const Kernel g = Kernel::gaussian();
  EXPECT_NEAR(kappa_ratio(g, 1e-3), kappa_ratio(g, 1e-2), 1e-4);
  // 2 (4 pi)^{-1/2} (1 - e^{-mu^2/4}) / mu^2 at mu = 1.
  EXPECT_NEAR(kappa_ratio(g, 1.0), 2.0 / std::sqrt(4.0 * std::numbers::pi) * (1.0 - std::exp(-0.25)), 1e-15);
}

TEST(Kappa, EvenKernelsSymmetric) {
  for (const Kernel& k : {Kernel::gaussian(), Kernel::laplace(), Kernel::cauchy()}) {
    for (double mu : {0.3, 1.0, 2.5}) EXPECT_DOUBLE_EQ(kappa_ratio(k, mu), kappa_ratio(k, -mu));
  }
  EXPECT_THROW(kappa_ratio(Kernel::gaussian(), 0.0), InvalidArgument);
}

TEST(Kappa, AllKernelsPass) {
  for (const Kernel& k : all_kernels()) {
    const ScanReport r = scan_kappa(k, 3.0, 300);
    EXPECT_TRUE(r.passed) << k.descriptor();
    EXPECT_GT(r.detail("kappa_lower"), 0.0);
    EXPECT_TRUE(std::isfinite(r.detail("kappa_upper")));
    EXPECT_EQ(r.surface.size(), 300u);
  }
}

TEST(Kappa, CauchyWideRange) {
  const ScanReport r = scan_kappa(Kernel::cauchy(), 10.0, 1000);
  EXPECT_TRUE(r.passed);
  // The closed form on the last grid point gives the lower constant (r decreases in mu).
  const double mu = 10.0;
  const double expected = 2.0 * (1.0 / (2.0 * std::numbers::pi) - 2.0 / (std::numbers::pi * (4.0 + mu * mu))) / (mu * mu);
  EXPECT_NEAR(r.detail("kappa_lower"), expected, 1e-15);
}

TEST(KappaProperty, OffGridValuesInsideScannedRange) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mu(0.01 + 1e-9, 3.0);
  for (const Kernel& k : all_kernels()) {
    const ScanReport r = scan_kappa(k, 3.0, 300);
    const double lo = r.detail("kappa_lower");
    const double hi = r.detail("kappa_upper");
    for (int i = 0; i < 100; ++i) {
      const double v = kappa_ratio(k, mu(rng));
      EXPECT_GE(v, lo * (1.0 - 1e-6)) << k.descriptor();
      EXPECT_LE(v, hi * (1.0 + 1e-6)) << k.descriptor();
    }
  }
}

TEST(Kappa, Errors) {
  EXPECT_THROW(scan_kappa(Kernel::gaussian(), 3.0, 9), InvalidArgument);
  EXPECT_THROW(scan_kappa(Kernel::gaussian(), 0.0, 100), InvalidArgument);
  EXPECT_THROW(scan_kappa(Kernel::gaussian(2), 1.0, 100), DimensionMismatch);
}

TEST(CsRatio, DiagonalIsExactlyOne) {
  for (const Kernel& k : all_kernels()) {
    for (double a : {-2.0, -0.4, 0.7, 3.0}) EXPECT_NEAR(cs_ratio(k, a, -a), 1.0, 1e-12) << k.descriptor();
  }
}

TEST(CsRatio, GaussianScan) {
  const ScanReport r = scan_cs_ratio(Kernel::gaussian(), 5.0, 100, 0.2);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.extremal_value, 1.0 - 1e-3);
  EXPECT_LT(r.detail("max_diagonal_deviation"), 1e-9);
  EXPECT_GT(r.detail("c_hat"), 0.0);
  EXPECT_LE(r.detail("max_ratio"), 1.0 + 1e-12);
  for (const auto& row : r.surface) EXPECT_LE(row[2], 1.0 + 1e-12);
}

TEST(CsRatio, FitStableUnderRefinement) {
  const double coarse = scan_cs_ratio(Kernel::gaussian(), 5.0, 100, 0.2).detail("c_hat");
  const double fine = scan_cs_ratio(Kernel::gaussian(), 5.0, 200, 0.2).detail("c_hat");
  EXPECT_LT(std::abs(fine - coarse), 0.5 * coarse);
}

TEST(CsRatio, Errors) {
  EXPECT_THROW(scan_cs_ratio(Kernel::gaussian(), 5.0, 101, 0.2), InvalidArgument);
  EXPECT_THROW(scan_cs_ratio(Kernel::gaussian(), 0.05, 10, 0.2), InvalidArgument);
  EXPECT_THROW(scan_cs_ratio(Kernel::gaussian(), 5.0, 10, 0.0), InvalidArgument);
  EXPECT_THROW(cs_ratio(Kernel::gaussian(), 0.0, 1.0), InvalidArgument);
}

TEST(L2W2Scan, PositiveForGaussianAndCauchy) {
  for (const Kernel& k : {Kernel::gaussian(), Kernel::cauchy()}) {
    const ScanReport r = scan_l2w2(k, 9, 3.0, 12);
    EXPECT_TRUE(r.passed) << k.descriptor();
    const double c = r.detail("c_phi_hat");
    EXPECT_GT(c, 0.0);
    for (const auto& row : r.surface) {
      EXPECT_TRUE(std::isfinite(row[4]));
      EXPECT_GT(row[4], 0.0);
    }
    EXPECT_GE(r.detail("near_diagonal_min"), c);
    EXPECT_LE(r.detail("near_diagonal_max"), 1e3 * c);
  }
}

TEST(CrucialScan, ReducesToKappaWhenShiftsAgree) {
  const Kernel g = Kernel::gaussian();
  InnerProductCache cache(g);
  const double mu = 1.25;
  const double ratio = crucial_ratio(cache, MixtureParams::scalar(0.2, mu), MixtureParams::scalar(0.7, mu));
  EXPECT_NEAR(ratio, kappa_ratio(g, mu) / (mu * mu), 1e-12);
}

TEST(CrucialScan, ReducesToShiftDifferenceWhenWeightsAgree) {
  const Kernel k = Kernel::laplace();
  InnerProductCache cache(k);
  const double mu = 2.0;
  const double mu_star = 0.5;
  const double ratio =
      crucial_ratio(cache, MixtureParams::scalar(0.4, mu), MixtureParams::scalar(0.4, mu_star));
  const double diff = mu - mu_star;
  EXPECT_NEAR(ratio, kappa_ratio(k, diff) * diff * diff / (mu_star * mu_star * diff * diff), 1e-12);
}

TEST(CrucialScan, PositiveForGaussianAndCauchy) {
  for (const Kernel& k : {Kernel::gaussian(), Kernel::cauchy()}) {
    const ScanReport r = scan_crucial_inequality(k, 9, 3.0, 12);
    EXPECT_TRUE(r.passed) << k.descriptor();
    EXPECT_GT(r.detail("ratio_min"), 0.0);
  }
}

TEST(Decorrelation, FinalValues) {
  const std::vector<double> shifts = default_decorrelation_shifts();
  ASSERT_EQ(shifts.back(), 50.0);
  const ScanReport g = decorrelation_profile(Kernel::gaussian(), shifts);
  EXPECT_LT(g.extremal_value, 1e-200);
  const ScanReport c = decorrelation_profile(Kernel::cauchy(), shifts);
  EXPECT_NEAR(c.extremal_value, 2.0 / (std::numbers::pi * 2504.0), 1e-18);
  const ScanReport l = decorrelation_profile(Kernel::laplace(), shifts);
  EXPECT_NEAR(l.extremal_value / (0.25 * std::exp(-50.0) * 51.0), 1.0, 1e-12);
  for (const Kernel& k : all_kernels()) EXPECT_TRUE(decorrelation_profile(k, shifts).passed) << k.descriptor();
  EXPECT_DOUBLE_EQ(decorrelation_threshold(Family::cauchy), 5e-2);
  EXPECT_DOUBLE_EQ(decorrelation_threshold(Family::skew_gaussian), 1e-4);
}

TEST(Decorrelation, FailsWhenShiftsTooSmall) {
  const ScanReport r = decorrelation_profile(Kernel::cauchy(), {0.5, 1.0});
  EXPECT_FALSE(r.passed);
  EXPECT_THROW(decorrelation_profile(Kernel::gaussian(), {2.0, 1.0}), InvalidArgument);
}

TEST(ScanReports, Reproducible) {
  for (const Kernel& k : all_kernels()) {
    EXPECT_EQ(format_report(scan_kappa(k, 3.0, 50)), format_report(scan_kappa(k, 3.0, 50)));
  }
  EXPECT_EQ(format_report(scan_cs_ratio(Kernel::laplace(), 2.0, 20, 0.2)),
            format_report(scan_cs_ratio(Kernel::laplace(), 2.0, 20, 0.2)));
}

TEST(ScanReports, InsensitiveToQuadratureRefinement) {
  for (const Kernel& k : {Kernel::gaussian(), Kernel::laplace()}) {
    EXPECT_EQ(scan_kappa(k, 3.0, 100).extremal_value, scan_kappa(doubled_quadrature(k), 3.0, 100).extremal_value);
  }
  const Kernel s = Kernel::skew_gaussian(10.0);
  const double base = scan_kappa(s, 3.0, 100).extremal_value;
  EXPECT_NEAR(scan_kappa(doubled_quadrature(s), 3.0, 100).extremal_value / base, 1.0, 1e-6);
  const double cs = scan_cs_ratio(s, 2.0, 20, 0.2).extremal_value;
  EXPECT_NEAR(scan_cs_ratio(doubled_quadrature(s), 2.0, 20, 0.2).extremal_value / cs, 1.0, 1e-6);
}

TEST(ScanReports, TextAndCsv) {
  const ScanReport r = scan_kappa(Kernel::gaussian(), 3.0, 10);
  const std::string text = format_report(r);
  EXPECT_EQ(text.rfind("check=kappa\n", 0), 0u);
  EXPECT_NE(text.find("\npassed=true\n"), std::string::npos);
  std::ostringstream csv;
  write_surface_csv(r, csv);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "mu,ratio");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 10u);
  EXPECT_THROW(r.detail("nope"), InvalidArgument);
}
