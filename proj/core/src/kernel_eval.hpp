#pragma once

#include <cmath>
#include <numbers>

#include "contamix/kernels.hpp"

namespace contamix::detail {

// Family-specialised scalar densities for hot loops; must agree with pdf().
template <Family F>
struct Density {
  double alpha = 0.0;

  double operator()(double x) const noexcept {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;
    if constexpr (F == Family::gaussian) {
      return inv_sqrt_2pi * std::exp(-0.5 * x * x);
    } else if constexpr (F == Family::laplace) {
      return 0.5 * std::exp(-std::abs(x));
    } else if constexpr (F == Family::cauchy) {
      return 1.0 / (std::numbers::pi * (1.0 + x * x));
    } else {
      constexpr double inv_sqrt2 = 0.7071067811865475244008443621048490;
      return inv_sqrt_2pi * std::exp(-0.5 * x * x) * std::erfc(-alpha * x * inv_sqrt2);
    }
  }
};

// Calls fn(Density<F>{...}) for the kernel's family.
template <class Fn>
decltype(auto) with_density(const Kernel& kernel, Fn&& fn) {
  switch (kernel.family()) {
    case Family::gaussian:
      return fn(Density<Family::gaussian>{});
    case Family::laplace:
      return fn(Density<Family::laplace>{});
    case Family::cauchy:
      return fn(Density<Family::cauchy>{});
    case Family::skew_gaussian:
      break;
  }
  return fn(Density<Family::skew_gaussian>{kernel.alpha()});
}

}  // namespace contamix::detail
