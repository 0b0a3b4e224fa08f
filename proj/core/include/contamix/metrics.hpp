#pragma once

#include <vector>

#include "contamix/kernels.hpp"
#include "contamix/mixture.hpp"

namespace contamix {

/// Two-point mixing measure (1 - lambda) delta_0 + lambda delta_mu, lambda in [0, 1].
struct MixingDistribution {
  double lambda = 0.0;
  std::vector<double> mu;

  static MixingDistribution scalar(double lambda, double mu) { return {lambda, {mu}}; }
  static MixingDistribution from(const MixtureParams& theta) { return {theta.lambda, theta.mu}; }
};

/// Squared 2-Wasserstein distance in closed form.
///
/// With arguments ordered so that lambda <= lambda' and a = ||mu||^2,
/// b = ||mu'||^2, c = ||mu - mu'||^2:
///   a + b >= c                  : (lambda' - lambda) b + lambda c
///   a + b <  c, lambda+lambda' <= 1 : lambda a + lambda' b
///   a + b <  c, lambda+lambda' >  1 : (1 - lambda') a + (1 - lambda) b + (lambda + lambda' - 1) c
double w2_squared(const MixingDistribution& g1, const MixingDistribution& g2);

/// 1-Wasserstein distance: (lambda' - lambda) ||mu'|| + lambda ||mu - mu'|| for lambda <= lambda'.
double w1(const MixingDistribution& g1, const MixingDistribution& g2);

/// W_p^p, p in {1, 2}, by minimising the coupling cost over the free mass q22.
///
/// The cost (lambda' - q) ||mu'||^p + (lambda - q) ||mu||^p + q ||mu - mu'||^p
/// is affine in q on [max(lambda + lambda' - 1, 0), lambda], so the minimum
/// sits at an endpoint; both endpoints are evaluated.
double transport_oracle(const MixingDistribution& g1, const MixingDistribution& g2, int p);

/// Coupling cost at a given q22 (arguments ordered by lambda internally).
double transport_cost(const MixingDistribution& g1, const MixingDistribution& g2, int p, double q22);

/// Feasible interval [lo, hi] of q22 for the ordered pair.
struct CouplingRange {
  double lo = 0.0;
  double hi = 0.0;
};
CouplingRange coupling_range(const MixingDistribution& g1, const MixingDistribution& g2);

/// ||f_theta1 - f_theta2||_2 / W_2^2(G_theta1, G_theta2).
///
/// Returns +infinity for identical mixtures (both distances vanish) and throws
/// NumericalFault when W_2^2 vanishes while the L2 distance does not.
double l2_over_w2sq_ratio(const Kernel& kernel, const MixtureParams& theta1,
                          const MixtureParams& theta2);

}  // namespace contamix
