#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "contamix/error.hpp"
#include "contamix/metrics.hpp"
#include "oracles.hpp"

using namespace contamix;

namespace {

MixingDistribution g(double l, double m) { return MixingDistribution::scalar(l, m); }

struct Tuple {
  MixingDistribution a;
  MixingDistribution b;
};

std::vector<Tuple> random_tuples(std::size_t count, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::vector<Tuple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Tuple t;
    t.a.lambda = lam(rng);
    t.b.lambda = lam(rng);
    for (std::size_t c = 0; c < dim; ++c) {
      t.a.mu.push_back(shift(rng));
      t.b.mu.push_back(shift(rng));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST(W2Squared, Cases) {
  EXPECT_EQ(w2_squared(g(0.4, 1.3), g(0.4, 1.3)), 0.0);
  EXPECT_NEAR(w2_squared(g(0.2, -1.0), g(0.3, 1.0)), 0.5, 1e-15);   // a + b < c, sum <= 1
  EXPECT_NEAR(w2_squared(g(0.8, -1.0), g(0.9, 1.0)), 3.1, 1e-14);   // a + b < c, sum > 1
  EXPECT_NEAR(w2_squared(g(0.2, 1.0), g(0.5, 1.5)), 0.725, 1e-15);  // a + b >= c
}

TEST(W2Squared, ArgumentOrderDoesNotMatter) {
  EXPECT_EQ(w2_squared(g(0.9, 1.0), g(0.8, -1.0)), w2_squared(g(0.8, -1.0), g(0.9, 1.0)));
  EXPECT_EQ(w2_squared(g(0.5, 1.5), g(0.2, 1.0)), w2_squared(g(0.2, 1.0), g(0.5, 1.5)));
}

TEST(W1, Cases) {
  EXPECT_EQ(w1(g(0.4, 1.3), g(0.4, 1.3)), 0.0);
  EXPECT_NEAR(w1(g(0.5, 1.0), g(0.5, 3.0)), 1.0, 1e-15);
  EXPECT_NEAR(w1(g(0.2, 1.0), g(0.5, 2.0)), 0.8, 1e-15);
}

TEST(Transport, OracleAgreesWithBruteForceScan) {
  for (std::size_t dim : {1u, 3u}) {
    for (const Tuple& t : random_tuples(500, dim, 100 + dim)) {
      for (int p : {1, 2}) {
        EXPECT_NEAR(transport_oracle(t.a, t.b, p), oracle::transport_scan(t.a.lambda, t.a.mu, t.b.lambda, t.b.mu, p),
                    1e-12);
      }
    }
  }
}

TEST(TransportProperty, ClosedFormsMatchOracle) {
  for (std::size_t dim : {1u, 3u}) {
    for (const Tuple& t : random_tuples(10'000, dim, 7 + dim)) {
      const double w2 = w2_squared(t.a, t.b);
      const double d1 = w1(t.a, t.b);
      ASSERT_NEAR(w2, transport_oracle(t.a, t.b, 2), 1e-12);
      ASSERT_NEAR(d1, transport_oracle(t.a, t.b, 1), 1e-12);
      ASSERT_EQ(w2, w2_squared(t.b, t.a));
      ASSERT_EQ(d1, w1(t.b, t.a));
      ASSERT_LE(d1, std::sqrt(w2) + 1e-12);
    }
  }
}

TEST(Transport, VanishesExactlyOnEqualMeasures) {
  // lambda = 0 and mu = 0 both give the Dirac mass at the origin.
  EXPECT_EQ(w2_squared(g(0.0, 2.0), g(0.0, -3.0)), 0.0);
  EXPECT_EQ(w1(g(0.0, 2.0), g(0.6, 0.0)), 0.0);
  EXPECT_EQ(transport_oracle(g(0.3, 0.0), g(0.0, 1.0), 2), 0.0);
  EXPECT_GT(w2_squared(g(0.3, 1.0), g(0.3, 1.01)), 0.0);
  EXPECT_GT(w1(g(0.3, 1.0), g(0.31, 1.0)), 0.0);
  EXPECT_GT(transport_oracle(g(0.3, 1.0), g(0.31, 1.0), 2), 0.0);
}

TEST(Transport, CouplingRangeAndCost) {
  const CouplingRange r = coupling_range(g(0.8, -1.0), g(0.9, 1.0));
  EXPECT_NEAR(r.lo, 0.7, 1e-15);
  EXPECT_NEAR(r.hi, 0.8, 1e-15);
  EXPECT_NEAR(transport_cost(g(0.8, -1.0), g(0.9, 1.0), 2, 0.7), 3.1, 1e-14);
  EXPECT_THROW(transport_oracle(g(0.1, 1.0), g(0.2, 1.0), 3), InvalidArgument);
}

TEST(Transport, InputValidation) {
  EXPECT_THROW(w2_squared(g(1.5, 1.0), g(0.2, 1.0)), InvalidArgument);
  EXPECT_THROW(w1(g(-0.1, 1.0), g(0.2, 1.0)), InvalidArgument);
  EXPECT_THROW(w2_squared(MixingDistribution{0.2, {1.0, 2.0}}, g(0.2, 1.0)), DimensionMismatch);
}

TEST(L2OverW2, IdenticalPairIsInfinite) {
  const MixtureParams t = MixtureParams::scalar(0.3, 1.0);
  EXPECT_EQ(l2_over_w2sq_ratio(Kernel::gaussian(), t, t), std::numeric_limits<double>::infinity());
}

TEST(L2OverW2, GaussianAgainstQuadrature) {
  const MixtureParams a = MixtureParams::scalar(0.3, 1.0);
  const MixtureParams b = MixtureParams::scalar(0.3, 1.1);
  const double ref = std::sqrt(oracle::l2_sq_quadrature(oracle::gauss, 0.3, 1.0, 0.3, 1.1)) /
                     oracle::transport_scan(0.3, {1.0}, 0.3, {1.1}, 2);
  const double got = l2_over_w2sq_ratio(Kernel::gaussian(), a, b);
  EXPECT_TRUE(std::isfinite(got));
  EXPECT_GT(got, 0.0);
  EXPECT_NEAR(got / ref, 1.0, 1e-6);
}

TEST(L2OverW2, ZeroTransportWithDistinctDensities) {
  // Both measures are the Dirac at 0, so both distances vanish.
  EXPECT_EQ(l2_over_w2sq_ratio(Kernel::gaussian(), MixtureParams::scalar(0.0, 1.0),
                               MixtureParams::scalar(0.0, 2.0)),
            std::numeric_limits<double>::infinity());
}
