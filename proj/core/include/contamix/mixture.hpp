#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "contamix/kernels.hpp"
#include "contamix/points.hpp"

namespace contamix {

/// theta = (lambda, mu) of f = (1 - lambda) phi + lambda phi(. - mu).
///
/// The same pair also describes the mixing measure (1 - lambda) delta_0 + lambda delta_mu.
/// Evaluation accepts lambda in [0, 1]; the estimator grid never produces 0.
struct MixtureParams {
  double lambda = 0.0;
  std::vector<double> mu;

  static MixtureParams scalar(double lambda, double mu) { return {lambda, {mu}}; }
  std::size_t dim() const noexcept { return mu.size(); }

  friend bool operator==(const MixtureParams&, const MixtureParams&) = default;
};

double mixture_pdf(const Kernel& kernel, const MixtureParams& theta, std::span<const double> x);
double mixture_pdf(const Kernel& kernel, const MixtureParams& theta, double x);

/// [lambda^2 + (1 - lambda)^2] ||phi||^2 + 2 lambda (1 - lambda) <phi, phi_mu>.
double mixture_l2_norm_sq(const Kernel& kernel, const MixtureParams& theta);

/// ||f_theta1 - f_theta2||_2^2 from kernel inner products, clamped at zero.
/// Arguments are put in a canonical order first, so the result is exactly symmetric.
double l2_distance_sq(const Kernel& kernel, const MixtureParams& theta1, const MixtureParams& theta2);

/// Same value with one-dimensional inner products taken from a shared cache.
double l2_distance_sq(const InnerProductCache& cache, const MixtureParams& theta1,
                      const MixtureParams& theta2);

/// Draws Z ~ phi and adds mu with probability lambda.
Points sample_mixture(const Kernel& kernel, const MixtureParams& theta, std::size_t count,
                      std::uint64_t seed);

}  // namespace contamix
