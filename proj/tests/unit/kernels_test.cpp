#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "contamix/error.hpp"
#include "contamix/kernels.hpp"
#include "oracles.hpp"

using namespace contamix;

namespace {

const double kInvSqrt4Pi = 1.0 / std::sqrt(4.0 * std::numbers::pi);

std::vector<Kernel> even_kernels() { return {Kernel::gaussian(), Kernel::laplace(), Kernel::cauchy()}; }

std::vector<Kernel> all_kernels() {
  return {Kernel::gaussian(), Kernel::laplace(), Kernel::cauchy(), Kernel::skew_gaussian(10.0)};
}

}  // namespace

TEST(KernelPdf, ValuesAtZero) {
  EXPECT_NEAR(pdf(Kernel::gaussian(), 0.0), 0.3989422804014327, 1e-15);
  EXPECT_DOUBLE_EQ(pdf(Kernel::laplace(), 0.0), 0.5);
  EXPECT_NEAR(pdf(Kernel::cauchy(), 0.0), 1.0 / std::numbers::pi, 1e-16);
  // Skew density at 0 is 2 psi(0) Psi(0) = psi(0).
  EXPECT_NEAR(pdf(Kernel::skew_gaussian(10.0), 0.0), 0.3989422804014327, 1e-15);
}

TEST(KernelPdf, SkewMatchesIndependentFormula) {
  const Kernel k = Kernel::skew_gaussian(10.0);
  for (double x : {-3.0, -0.2, 0.0, 0.05, 0.7, 2.5}) {
    EXPECT_NEAR(pdf(k, x), oracle::skew(x, 10.0), 1e-15) << x;
  }
}

TEST(KernelPdf, MultivariateGaussianFactorises) {
  const Kernel k = Kernel::gaussian(3);
  const std::vector<double> x = {0.3, -1.2, 2.0};
  EXPECT_NEAR(pdf(k, x), oracle::gauss(0.3) * oracle::gauss(-1.2) * oracle::gauss(2.0), 1e-16);
  const std::vector<double> wrong = {0.1, 0.2};
  EXPECT_THROW(pdf(k, wrong), DimensionMismatch);
}

TEST(KernelPdf, IntegratesToOne) {
  for (const Kernel& k : {Kernel::gaussian(), Kernel::laplace(), Kernel::skew_gaussian(10.0)}) {
    const double mass = oracle::simpson([&](double x) { return pdf(k, x); }, -40.0, 40.0, 1 << 16);
    EXPECT_NEAR(mass, 1.0, 1e-6) << k.descriptor();
  }
  const double cauchy_mass = oracle::integrate_tan([](double x) { return pdf(Kernel::cauchy(), x); }, 1 << 12);
  EXPECT_NEAR(cauchy_mass, 1.0, 1e-6);
}

TEST(KernelConstruction, Validation) {
  EXPECT_THROW(Kernel::skew_gaussian(0.0), InvalidArgument);
  EXPECT_THROW(Kernel::make(Family::skew_gaussian), InvalidArgument);
  EXPECT_THROW(Kernel::make(Family::laplace, std::nullopt, 2), InvalidArgument);
  EXPECT_THROW(Kernel::gaussian(0), InvalidArgument);
  EXPECT_NO_THROW(Kernel::make(Family::gaussian, std::nullopt, 4));
  EXPECT_EQ(parse_family("skew_gaussian"), Family::skew_gaussian);
  EXPECT_THROW(parse_family("uniform"), InvalidArgument);
}

TEST(KernelConstruction, QuadratureWindowChecks) {
  const Kernel g = Kernel::gaussian();
  EXPECT_DOUBLE_EQ(default_quadrature(Family::gaussian).half_width, 12.0);
  EXPECT_DOUBLE_EQ(default_quadrature(Family::laplace).half_width, 30.0);
  EXPECT_DOUBLE_EQ(default_quadrature(Family::skew_gaussian).half_width, 12.0);
  EXPECT_THROW(g.with_quadrature({3.0, 1 << 14, 1e-12}), InvalidArgument);
  EXPECT_THROW(g.with_quadrature({12.0, 1001, 1e-12}), InvalidArgument);
  EXPECT_LT(tail_mass(Kernel::laplace(), 30.0), 1e-12);
  EXPECT_LT(tail_mass(g, 12.0), 1e-12);
}

TEST(SelfInner, ClosedForms) {
  EXPECT_NEAR(self_inner(Kernel::gaussian()), kInvSqrt4Pi, 1e-16);
  EXPECT_DOUBLE_EQ(self_inner(Kernel::laplace()), 0.25);
  EXPECT_NEAR(self_inner(Kernel::cauchy()), 1.0 / (2.0 * std::numbers::pi), 1e-17);
  EXPECT_NEAR(self_inner(Kernel::gaussian(2)), 1.0 / (4.0 * std::numbers::pi), 1e-16);
}

TEST(CrossInner, ClosedForms) {
  EXPECT_NEAR(cross_inner(Kernel::gaussian(), 2.0), kInvSqrt4Pi * std::exp(-1.0), 1e-16);
  EXPECT_NEAR(cross_inner(Kernel::laplace(), 1.0), std::exp(-1.0) / 2.0, 1e-16);
  EXPECT_NEAR(cross_inner(Kernel::cauchy(), 2.0), 1.0 / (4.0 * std::numbers::pi), 1e-17);
  const std::vector<double> mu = {1.0, -2.0, 0.5};
  EXPECT_NEAR(cross_inner(Kernel::gaussian(3), mu),
              std::pow(4.0 * std::numbers::pi, -1.5) * std::exp(-5.25 / 4.0), 1e-16);
}

TEST(CrossInner, ClosedFormsAgreeWithQuadrature) {
  for (double mu : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(cross_inner(Kernel::gaussian(), mu), oracle::windowed_inner(oracle::gauss, mu, 12.0, 1 << 14),
                1e-8);
    EXPECT_NEAR(cross_inner(Kernel::laplace(), mu), oracle::windowed_inner(oracle::laplace, mu, 30.0, 1 << 14),
                1e-8);
    const double cauchy_ref =
        oracle::integrate_tan([mu](double x) { return oracle::cauchy(x) * oracle::cauchy(x - mu); }, 1 << 14);
    EXPECT_NEAR(cross_inner(Kernel::cauchy(), mu), cauchy_ref, 1e-8);
  }
}

TEST(CrossInner, SkewAgainstHighPrecisionValues) {
  // Reference values from 50-digit adaptive quadrature.
  const Kernel k = Kernel::skew_gaussian(10.0);
  const std::vector<std::pair<double, double>> table = {
      {0.0, 0.52856766575274397}, {0.5, 0.38493252173900003}, {1.0, 0.21259501619968381},
      {2.0, 0.033505290066575986}, {5.0, 5.0540281920576149e-7}};
  for (const auto& [mu, ref] : table) EXPECT_NEAR(cross_inner(k, mu), ref, 1e-10) << mu;
}

TEST(CrossInner, SkewAgainstMonteCarlo) {
  const Kernel k = Kernel::skew_gaussian(10.0);
  const McEstimate mc = mc_inner(k, 1.0, 10'000'000, 2024);
  ASSERT_TRUE(mc.std_error.has_value());
  EXPECT_LT(std::abs(mc.estimate - cross_inner(k, 1.0)), 3.0 * *mc.std_error);
}

TEST(CrossInner, SymmetryAndIdentityAtZero) {
  for (const Kernel& k : even_kernels()) {
    for (double mu : {0.1, 0.7, 1.9, 4.4, 13.0}) {
      EXPECT_DOUBLE_EQ(cross_inner(k, mu), cross_inner(k, -mu)) << k.descriptor();
    }
  }
  for (const Kernel& k : all_kernels()) EXPECT_EQ(cross_inner(k, 0.0), self_inner(k));
  // The skew kernel is not even, but <phi, phi_mu> = <phi_{-mu}, phi> still holds.
  const Kernel s = Kernel::skew_gaussian(10.0);
  EXPECT_NEAR(cross_inner(s, 1.3), cross_inner(s, -1.3), 1e-12);
}

TEST(CrossInner, BoundedBySelfInner) {
  for (const Kernel& k : all_kernels()) {
    const double s = self_inner(k);
    for (double mu = -8.0; mu <= 8.0; mu += 0.37) {
      const double c = cross_inner(k, mu);
      EXPECT_LT(std::abs(c), s) << k.descriptor() << " mu=" << mu;
    }
  }
}

TEST(CrossInner, Decorrelates) {
  for (const Kernel& k : {Kernel::gaussian(), Kernel::laplace()}) {
    EXPECT_LT(cross_inner(k, 50.0), 1e-6 * self_inner(k));
  }
  EXPECT_LT(cross_inner(Kernel::cauchy(), 50.0), 1e-2 * self_inner(Kernel::cauchy()));
}

TEST(McInner, GaussianAtZero) {
  const McEstimate mc = mc_inner(Kernel::gaussian(), 0.0, 1'000'000, 99);
  ASSERT_TRUE(mc.std_error.has_value());
  EXPECT_LT(std::abs(mc.estimate - kInvSqrt4Pi), 4.0 * *mc.std_error);
}

TEST(McInner, SingleDrawIsOneEvaluation) {
  for (const Kernel& k : all_kernels()) {
    const McEstimate mc = mc_inner(k, 0.8, 1, 5);
    EXPECT_FALSE(mc.std_error.has_value());
    const double x = sample(k, 1, 5)[0][0];
    EXPECT_DOUBLE_EQ(mc.estimate, pdf(k, x - 0.8)) << k.descriptor();
  }
  EXPECT_THROW(mc_inner(Kernel::gaussian(), 0.0, 0, 1), InvalidArgument);
}

TEST(McInner, ReplicationBudget) {
  EXPECT_EQ(replication_mc_draws(100), 10'000u);
  EXPECT_EQ(replication_mc_draws(5000), 25'000'000u);
  EXPECT_EQ(replication_mc_draws(20000), 100'000'000u);
}

TEST(Sample, EmptyAndDeterministic) {
  EXPECT_TRUE(sample(Kernel::cauchy(), 0, 1).empty());
  const Points a = sample(Kernel::laplace(), 100, 17);
  const Points b = sample(Kernel::laplace(), 100, 17);
  EXPECT_TRUE(std::equal(a.coords().begin(), a.coords().end(), b.coords().begin()));
  EXPECT_EQ(sample(Kernel::gaussian(2), 10, 3).dim(), 2u);
}

TEST(Sample, CauchyMedian) {
  Points p = sample(Kernel::cauchy(), 100'000, 11);
  std::vector<double> v(p.coords().begin(), p.coords().end());
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  EXPECT_NEAR(v[v.size() / 2], 0.0, 0.02);
}

TEST(Sample, LaplaceMoments) {
  Points p = sample(Kernel::laplace(), 100'000, 12);
  double mean = 0.0;
  for (double x : p.coords()) mean += x;
  mean /= static_cast<double>(p.size());
  double var = 0.0;
  for (double x : p.coords()) var += (x - mean) * (x - mean);
  var /= static_cast<double>(p.size() - 1);
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 2.0, 0.1);
}

TEST(Sample, SkewMean) {
  // E[X] = delta sqrt(2/pi) with delta = alpha / sqrt(1 + alpha^2).
  Points p = sample(Kernel::skew_gaussian(10.0), 100'000, 13);
  double mean = 0.0;
  for (double x : p.coords()) mean += x;
  mean /= static_cast<double>(p.size());
  EXPECT_NEAR(mean, 10.0 / std::sqrt(101.0) * std::sqrt(2.0 / std::numbers::pi), 0.01);
}

TEST(InnerProductCacheTest, MatchesDirectEvaluation) {
  InnerProductCache cache(Kernel::skew_gaussian(3.0));
  EXPECT_EQ(cache(0.75), cross_inner(Kernel::skew_gaussian(3.0), 0.75));
  EXPECT_EQ(cache(0.75), cache(0.75));
  EXPECT_EQ(cache.size(), 1u);
  EXPECT_THROW(InnerProductCache(Kernel::gaussian(2)), DimensionMismatch);
}
