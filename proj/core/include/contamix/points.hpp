#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "contamix/error.hpp"

namespace contamix {

/// A set of observations in R^d stored row-major.
class Points {
 public:
  explicit Points(std::size_t dim = 1) : dim_(dim) {
    if (dim == 0) throw InvalidArgument("Points: dimension must be positive");
  }

  Points(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim == 0) throw InvalidArgument("Points: dimension must be positive");
    if (coords_.size() % dim_ != 0) {
      throw DimensionMismatch("Points: coordinate count is not a multiple of the dimension");
    }
  }

  /// One-dimensional points from scalar values.
  static Points scalar(std::vector<double> values) { return Points(1, std::move(values)); }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }

  void push_back(std::span<const double> x) {
    if (x.size() != dim_) throw DimensionMismatch("Points::push_back: dimension mismatch");
    coords_.insert(coords_.end(), x.begin(), x.end());
  }

  void reserve(std::size_t count) { coords_.reserve(count * dim_); }

  std::span<const double> coords() const noexcept { return coords_; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

}  // namespace contamix
