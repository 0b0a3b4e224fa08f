#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "contamix/points.hpp"

namespace contamix {

enum class Family { gaussian, laplace, cauchy, skew_gaussian };

std::string_view to_string(Family family) noexcept;
/// Inverse of to_string; throws InvalidArgument on an unknown name.
Family parse_family(std::string_view name);

/// Composite-Simpson settings used where no closed-form inner product exists.
struct QuadratureSpec {
  double half_width = 12.0;
  std::size_t panels = std::size_t{1} << 14;
  double tail_tolerance = 1e-12;

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

/// Baseline density phi of the contamination model.
///
/// Only the Gaussian family may have dim > 1. The skew-Gaussian density is
/// 2 psi(x) Psi(alpha x) with psi, Psi the standard normal pdf and cdf.
class Kernel {
 public:
  static Kernel gaussian(std::size_t dim = 1);
  static Kernel laplace();
  static Kernel cauchy();
  static Kernel skew_gaussian(double alpha);
  /// Builds a kernel from a family name; alpha is required for skew_gaussian only.
  static Kernel make(Family family, std::optional<double> alpha = std::nullopt, std::size_t dim = 1);

  Family family() const noexcept { return family_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t dim() const noexcept { return dim_; }
  const QuadratureSpec& quadrature() const noexcept { return quadrature_; }

  /// Replaces the quadrature settings after checking them against this family.
  Kernel with_quadrature(const QuadratureSpec& spec) const;

  /// Human-readable descriptor, e.g. "skew_gaussian(alpha=10)".
  std::string descriptor() const;

  bool is_even() const noexcept { return family_ != Family::skew_gaussian; }
  bool has_closed_form_inner() const noexcept { return family_ != Family::skew_gaussian; }

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  Kernel(Family family, double alpha, std::size_t dim, QuadratureSpec spec);

  Family family_;
  double alpha_;
  std::size_t dim_;
  QuadratureSpec quadrature_;
};

/// Default per-family quadrature window (tail mass below 1e-12).
QuadratureSpec default_quadrature(Family family);

/// Probability mass of phi outside [-L, L] (upper bound for skew_gaussian).
double tail_mass(const Kernel& kernel, double half_width);

/// Standard normal cumulative distribution function.
double normal_cdf(double x) noexcept;

/// phi(x) for a one-dimensional kernel; no dimension check.
double pdf(const Kernel& kernel, double x) noexcept;
double pdf(const Kernel& kernel, std::span<const double> x);

/// ||phi||_2^2.
double self_inner(const Kernel& kernel);

/// <phi, phi(. - mu)>. Closed form except for skew_gaussian, which uses
/// composite Simpson over the kernel's quadrature window.
double cross_inner(const Kernel& kernel, double mu);
double cross_inner(const Kernel& kernel, std::span<const double> mu);

struct McEstimate {
  double estimate = 0.0;
  /// Absent when a single draw leaves the sample variance undefined.
  std::optional<double> std_error;
};

/// Sample-mean estimate of E_{X~phi}[phi(X - mu)].
McEstimate mc_inner(const Kernel& kernel, std::span<const double> mu, std::uint64_t draws,
                    std::uint64_t seed);
McEstimate mc_inner(const Kernel& kernel, double mu, std::uint64_t draws, std::uint64_t seed);

/// Monte-Carlo budget used in replication mode: n^2 capped at 1e8.
std::uint64_t replication_mc_draws(std::size_t n) noexcept;

/// i.i.d. draws from phi, deterministic given the seed.
Points sample(const Kernel& kernel, std::size_t count, std::uint64_t seed);

/// Memoised one-dimensional cross_inner. Concurrent lookups share a read
/// lock; a miss computes outside the lock, so racing fills store the same value.
class InnerProductCache {
 public:
  explicit InnerProductCache(Kernel kernel);

  double operator()(double mu) const;
  const Kernel& kernel() const noexcept { return kernel_; }
  std::size_t size() const;

 private:
  Kernel kernel_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<double, double> values_;
};

}  // namespace contamix
