#include "contamix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace contamix {
namespace {

struct Ordered {
  const MixingDistribution& low;   // smaller lambda
  const MixingDistribution& high;  // larger lambda
};

void check(const MixingDistribution& g, const char* what) {
  if (!(g.lambda >= 0.0 && g.lambda <= 1.0)) {
    throw InvalidArgument(std::string(what) + ": lambda must lie in [0, 1]");
  }
}

Ordered order(const MixingDistribution& g1, const MixingDistribution& g2, const char* what) {
  check(g1, what);
  check(g2, what);
  if (g1.mu.size() != g2.mu.size()) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
  bool swap = g2.lambda < g1.lambda;
  if (g1.lambda == g2.lambda) {
    swap = std::lexicographical_compare(g2.mu.begin(), g2.mu.end(), g1.mu.begin(), g1.mu.end());
  }
  return swap ? Ordered{g2, g1} : Ordered{g1, g2};
}

struct SquaredNorms {
  double mu = 0.0;    // ||mu||^2
  double mu2 = 0.0;   // ||mu'||^2
  double diff = 0.0;  // ||mu - mu'||^2
};

SquaredNorms norms(const Ordered& o) {
  SquaredNorms s;
  for (std::size_t k = 0; k < o.low.mu.size(); ++k) {
    const double a = o.low.mu[k];
    const double b = o.high.mu[k];
    s.mu += a * a;
    s.mu2 += b * b;
    s.diff += (a - b) * (a - b);
  }
  return s;
}

double cost(const Ordered& o, const SquaredNorms& s, int p, double q) {
  const double l = o.low.lambda;
  const double lp = o.high.lambda;
  if (p == 2) return (lp - q) * s.mu2 + (l - q) * s.mu + q * s.diff;
  return (lp - q) * std::sqrt(s.mu2) + (l - q) * std::sqrt(s.mu) + q * std::sqrt(s.diff);
}

void check_p(int p) {
  if (p != 1 && p != 2) throw InvalidArgument("transport order p must be 1 or 2");
}

}  // namespace

double w2_squared(const MixingDistribution& g1, const MixingDistribution& g2) {
  const Ordered o = order(g1, g2, "w2_squared");
  const SquaredNorms s = norms(o);
  const double l = o.low.lambda;
  const double lp = o.high.lambda;
  if (s.mu + s.mu2 >= s.diff) return (lp - l) * s.mu2 + l * s.diff;
  if (l + lp <= 1.0) return l * s.mu + lp * s.mu2;
  return (1.0 - lp) * s.mu + (1.0 - l) * s.mu2 + (l + lp - 1.0) * s.diff;
}

double w1(const MixingDistribution& g1, const MixingDistribution& g2) {
  const Ordered o = order(g1, g2, "w1");
  const SquaredNorms s = norms(o);
  return (o.high.lambda - o.low.lambda) * std::sqrt(s.mu2) + o.low.lambda * std::sqrt(s.diff);
}

CouplingRange coupling_range(const MixingDistribution& g1, const MixingDistribution& g2) {
  const Ordered o = order(g1, g2, "coupling_range");
  return {std::max(o.low.lambda + o.high.lambda - 1.0, 0.0), o.low.lambda};
}

double transport_cost(const MixingDistribution& g1, const MixingDistribution& g2, int p,
                      double q22) {
  check_p(p);
  const Ordered o = order(g1, g2, "transport_cost");
  return cost(o, norms(o), p, q22);
}

double transport_oracle(const MixingDistribution& g1, const MixingDistribution& g2, int p) {
  check_p(p);
  const Ordered o = order(g1, g2, "transport_oracle");
  const SquaredNorms s = norms(o);
  const double lo = std::max(o.low.lambda + o.high.lambda - 1.0, 0.0);
  const double hi = o.low.lambda;
  return std::max(0.0, std::min(cost(o, s, p, lo), cost(o, s, p, hi)));
}

double l2_over_w2sq_ratio(const Kernel& kernel, const MixtureParams& theta1,
                          const MixtureParams& theta2) {
  const double l2_sq = l2_distance_sq(kernel, theta1, theta2);
  const double w2sq =
      w2_squared(MixingDistribution::from(theta1), MixingDistribution::from(theta2));
  if (w2sq == 0.0) {
    // Same measure written two ways (e.g. mu = 0): the L2 expansion leaves round-off only.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * self_inner(kernel);
    if (l2_sq <= noise) return std::numeric_limits<double>::infinity();
    throw NumericalFault("l2_over_w2sq_ratio: W2 vanishes but the L2 distance does not");
  }
  return std::sqrt(l2_sq) / w2sq;
}

}  // namespace contamix
