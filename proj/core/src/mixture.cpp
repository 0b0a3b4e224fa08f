#include "contamix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "random.hpp"

namespace contamix {
namespace {

void check_theta(const Kernel& kernel, const MixtureParams& theta, const char* what) {
  if (theta.mu.size() != kernel.dim()) {
    throw DimensionMismatch(std::string(what) + ": shift dimension differs from kernel dimension");
  }
  if (!(theta.lambda >= 0.0 && theta.lambda <= 1.0)) {
    throw InvalidArgument(std::string(what) + ": lambda must lie in [0, 1]");
  }
}

bool canonical_before(const MixtureParams& a, const MixtureParams& b) {
  if (a.lambda != b.lambda) return a.lambda < b.lambda;
  return std::lexicographical_compare(a.mu.begin(), a.mu.end(), b.mu.begin(), b.mu.end());
}

}  // namespace

double mixture_pdf(const Kernel& kernel, const MixtureParams& theta, std::span<const double> x) {
  check_theta(kernel, theta, "mixture_pdf");
  if (x.size() != kernel.dim()) throw DimensionMismatch("mixture_pdf: point dimension mismatch");
  if (x.size() == 1) return (1.0 - theta.lambda) * pdf(kernel, x[0]) + theta.lambda * pdf(kernel, x[0] - theta.mu[0]);
  std::vector<double> shifted(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) shifted[k] = x[k] - theta.mu[k];
  return (1.0 - theta.lambda) * pdf(kernel, x) + theta.lambda * pdf(kernel, shifted);
}

double mixture_pdf(const Kernel& kernel, const MixtureParams& theta, double x) {
  check_theta(kernel, theta, "mixture_pdf");
  if (kernel.dim() != 1) throw DimensionMismatch("mixture_pdf: scalar point for a multivariate kernel");
  return (1.0 - theta.lambda) * pdf(kernel, x) + theta.lambda * pdf(kernel, x - theta.mu[0]);
}

double mixture_l2_norm_sq(const Kernel& kernel, const MixtureParams& theta) {
  check_theta(kernel, theta, "mixture_l2_norm_sq");
  const double l = theta.lambda;
  return (l * l + (1.0 - l) * (1.0 - l)) * self_inner(kernel) +
         2.0 * l * (1.0 - l) * cross_inner(kernel, theta.mu);
}

namespace {

template <class Inner>
double l2_distance_sq_impl(const Kernel& kernel, const MixtureParams& theta1,
                           const MixtureParams& theta2, Inner&& inner) {
  check_theta(kernel, theta1, "l2_distance_sq");
  check_theta(kernel, theta2, "l2_distance_sq");
  const bool swap = canonical_before(theta2, theta1);
  const MixtureParams& a = swap ? theta2 : theta1;
  const MixtureParams& b = swap ? theta1 : theta2;

  // f_a - f_b = (lb - la) phi + la phi_{mu_a} - lb phi_{mu_b}
  std::vector<double> diff(a.mu.size());
  for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = a.mu[k] - b.mu[k];
  const std::vector<double> zero(a.mu.size(), 0.0);
  const double s = inner(std::span<const double>(zero));
  const double ca = inner(std::span<const double>(a.mu));
  const double cb = inner(std::span<const double>(b.mu));
  const double cab = inner(std::span<const double>(diff));
  const double la = a.lambda;
  const double lb = b.lambda;
  const double d = lb - la;
  const double value = (d * d + la * la + lb * lb) * s + 2.0 * d * la * ca - 2.0 * d * lb * cb -
                       2.0 * la * lb * cab;
  return std::max(value, 0.0);
}

}  // namespace

double l2_distance_sq(const Kernel& kernel, const MixtureParams& theta1,
                      const MixtureParams& theta2) {
  return l2_distance_sq_impl(kernel, theta1, theta2,
                             [&](std::span<const double> mu) { return cross_inner(kernel, mu); });
}

double l2_distance_sq(const InnerProductCache& cache, const MixtureParams& theta1,
                      const MixtureParams& theta2) {
  return l2_distance_sq_impl(cache.kernel(), theta1, theta2,
                             [&](std::span<const double> mu) { return cache(mu[0]); });
}

Points sample_mixture(const Kernel& kernel, const MixtureParams& theta, std::size_t count,
                      std::uint64_t seed) {
  check_theta(kernel, theta, "sample_mixture");
  // Base draws and component labels come from two streams of one engine
  // family so that count and seed fully determine the sample.
  Points base = sample(kernel, count, seed);
  detail::Engine labels(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<double> coords(base.coords().begin(), base.coords().end());
  const std::size_t d = kernel.dim();
  for (std::size_t i = 0; i < count; ++i) {
    if (detail::open_unit(labels) < theta.lambda) {
      for (std::size_t k = 0; k < d; ++k) coords[i * d + k] += theta.mu[k];
    }
  }
  return Points(d, std::move(coords));
}

}  // namespace contamix
