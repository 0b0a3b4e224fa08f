#include "contamix/kernels.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "kernel_eval.hpp"
#include "quadrature.hpp"
#include "random.hpp"

namespace contamix {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kPi = std::numbers::pi;

void check_dim(const Kernel& kernel, std::size_t got, const char* what) {
  if (got != kernel.dim()) {
    std::ostringstream msg;
    msg << what << ": expected dimension " << kernel.dim() << ", got " << got;
    throw DimensionMismatch(msg.str());
  }
}

double skew_cross_inner(const Kernel& kernel, double mu) {
  const auto& q = kernel.quadrature();
  const double lo = std::min(0.0, mu) - q.half_width;
  const double hi = std::max(0.0, mu) + q.half_width;
  return detail::simpson([&](double x) { return pdf(kernel, x) * pdf(kernel, x - mu); }, lo, hi,
                         q.panels);
}

// One draw from phi written into out (size kernel.dim()).
template <class Normal>
void draw(const Kernel& kernel, detail::Engine& rng, Normal& normal, std::span<double> out) {
  switch (kernel.family()) {
    case Family::gaussian:
      for (double& v : out) v = normal(rng);
      return;
    case Family::laplace: {
      const double u = detail::open_unit(rng) - 0.5;
      out[0] = u < 0.0 ? std::log1p(2.0 * u) : -std::log1p(-2.0 * u);
      return;
    }
    case Family::cauchy:
      out[0] = std::tan(kPi * (detail::open_unit(rng) - 0.5));
      return;
    case Family::skew_gaussian: {
      const double delta = kernel.alpha() / std::sqrt(1.0 + kernel.alpha() * kernel.alpha());
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      out[0] = delta * std::abs(z1) + std::sqrt(1.0 - delta * delta) * z2;
      return;
    }
  }
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::laplace:
      return "laplace";
    case Family::cauchy:
      return "cauchy";
    case Family::skew_gaussian:
      return "skew_gaussian";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "gaussian") return Family::gaussian;
  if (name == "laplace") return Family::laplace;
  if (name == "cauchy") return Family::cauchy;
  if (name == "skew_gaussian" || name == "skew") return Family::skew_gaussian;
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'");
}

QuadratureSpec default_quadrature(Family family) {
  QuadratureSpec spec;
  spec.half_width = family == Family::laplace ? 30.0 : 12.0;
  return spec;
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double tail_mass(const Kernel& kernel, double half_width) {
  const double gauss_tail = std::erfc(half_width * kInvSqrt2);
  switch (kernel.family()) {
    case Family::gaussian:
      return static_cast<double>(kernel.dim()) * gauss_tail;
    case Family::laplace:
      return std::exp(-half_width);
    case Family::cauchy:
      return 1.0 - 2.0 / kPi * std::atan(half_width);
    case Family::skew_gaussian:
      return 2.0 * gauss_tail;
  }
  return 1.0;
}

Kernel::Kernel(Family family, double alpha, std::size_t dim, QuadratureSpec spec)
    : family_(family), alpha_(alpha), dim_(dim), quadrature_(spec) {}

Kernel Kernel::gaussian(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("kernel dimension must be positive");
  return Kernel(Family::gaussian, 0.0, dim, default_quadrature(Family::gaussian));
}

Kernel Kernel::laplace() { return Kernel(Family::laplace, 0.0, 1, default_quadrature(Family::laplace)); }

Kernel Kernel::cauchy() { return Kernel(Family::cauchy, 0.0, 1, default_quadrature(Family::cauchy)); }

Kernel Kernel::skew_gaussian(double alpha) {
  if (!(alpha != 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("skew_gaussian requires a finite nonzero alpha");
  }
  return Kernel(Family::skew_gaussian, alpha, 1, default_quadrature(Family::skew_gaussian));
}

Kernel Kernel::make(Family family, std::optional<double> alpha, std::size_t dim) {
  if (dim != 1 && family != Family::gaussian) {
    throw InvalidArgument("only the gaussian kernel supports dimension > 1");
  }
  switch (family) {
    case Family::gaussian:
      return gaussian(dim);
    case Family::laplace:
      return laplace();
    case Family::cauchy:
      return cauchy();
    case Family::skew_gaussian:
      if (!alpha) throw InvalidArgument("skew_gaussian requires alpha");
      return skew_gaussian(*alpha);
  }
  throw InvalidArgument("unknown kernel family");
}

Kernel Kernel::with_quadrature(const QuadratureSpec& spec) const {
  if (!(spec.half_width > 0.0)) throw InvalidArgument("quadrature half_width must be positive");
  if (spec.panels == 0 || spec.panels % 2 != 0) {
    throw InvalidArgument("quadrature panel count must be positive and even");
  }
  // Cauchy inner products never go through quadrature.
  if (family_ != Family::cauchy && !(tail_mass(*this, spec.half_width) < spec.tail_tolerance)) {
    throw InvalidArgument("quadrature window leaves tail mass above tolerance for " + descriptor());
  }
  Kernel out = *this;
  out.quadrature_ = spec;
  return out;
}

std::string Kernel::descriptor() const {
  std::ostringstream out;
  out << to_string(family_);
  if (family_ == Family::skew_gaussian) out << "(alpha=" << alpha_ << ")";
  if (dim_ > 1) out << "[d=" << dim_ << "]";
  return out.str();
}

double pdf(const Kernel& kernel, double x) noexcept {
  return detail::with_density(kernel, [x](auto density) { return density(x); });
}

double pdf(const Kernel& kernel, std::span<const double> x) {
  check_dim(kernel, x.size(), "pdf");
  if (x.size() == 1) return pdf(kernel, x[0]);
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return std::pow(kInvSqrt2Pi, static_cast<double>(x.size())) * std::exp(-0.5 * sq);
}

double self_inner(const Kernel& kernel) {
  if (kernel.dim() == 1) return cross_inner(kernel, 0.0);
  const std::vector<double> zero(kernel.dim(), 0.0);
  return cross_inner(kernel, zero);
}

double cross_inner(const Kernel& kernel, double mu) {
  switch (kernel.family()) {
    case Family::gaussian:
      return std::pow(4.0 * kPi, -0.5 * static_cast<double>(kernel.dim())) *
             std::exp(-0.25 * mu * mu);
    case Family::laplace: {
      const double a = std::abs(mu);
      return 0.25 * std::exp(-a) * (1.0 + a);
    }
    case Family::cauchy:
      return 2.0 / (kPi * (4.0 + mu * mu));
    case Family::skew_gaussian:
      return skew_cross_inner(kernel, mu);
  }
  return 0.0;
}

double cross_inner(const Kernel& kernel, std::span<const double> mu) {
  check_dim(kernel, mu.size(), "cross_inner");
  if (mu.size() == 1) return cross_inner(kernel, mu[0]);
  double sq = 0.0;
  for (double v : mu) sq += v * v;
  return std::pow(4.0 * kPi, -0.5 * static_cast<double>(mu.size())) * std::exp(-0.25 * sq);
}

McEstimate mc_inner(const Kernel& kernel, std::span<const double> mu, std::uint64_t draws,
                    std::uint64_t seed) {
  check_dim(kernel, mu.size(), "mc_inner");
  if (draws == 0) throw InvalidArgument("mc_inner: draws must be at least 1");
  detail::Engine rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> x(kernel.dim());
  std::vector<double> shifted(kernel.dim());
  // Welford running mean and sum of squared deviations.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t j = 0; j < draws; ++j) {
    draw(kernel, rng, normal, x);
    for (std::size_t k = 0; k < x.size(); ++k) shifted[k] = x[k] - mu[k];
    const double v = pdf(kernel, shifted);
    const double delta = v - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (v - mean);
  }
  McEstimate out{mean, std::nullopt};
  if (draws > 1) {
    const double n = static_cast<double>(draws);
    out.std_error = std::sqrt(m2 / (n - 1.0) / n);
  }
  return out;
}

McEstimate mc_inner(const Kernel& kernel, double mu, std::uint64_t draws, std::uint64_t seed) {
  return mc_inner(kernel, std::span<const double>(&mu, 1), draws, seed);
}

std::uint64_t replication_mc_draws(std::size_t n) noexcept {
  constexpr std::uint64_t cap = 100'000'000;
  const auto nn = static_cast<std::uint64_t>(n);
  if (nn > 10'000) return cap;
  return std::min(nn * nn, cap);
}

Points sample(const Kernel& kernel, std::size_t count, std::uint64_t seed) {
  detail::Engine rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> coords(count * kernel.dim());
  for (std::size_t i = 0; i < count; ++i) {
    draw(kernel, rng, normal, std::span<double>(coords.data() + i * kernel.dim(), kernel.dim()));
  }
  return Points(kernel.dim(), std::move(coords));
}

InnerProductCache::InnerProductCache(Kernel kernel) : kernel_(std::move(kernel)) {
  if (kernel_.dim() != 1) throw DimensionMismatch("InnerProductCache is one-dimensional");
}

double InnerProductCache::operator()(double mu) const {
  {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(mu); it != values_.end()) return it->second;
  }
  const double value = cross_inner(kernel_, mu);
  std::unique_lock lock(mutex_);
  values_.emplace(mu, value);
  return value;
}

std::size_t InnerProductCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

}  // namespace contamix
