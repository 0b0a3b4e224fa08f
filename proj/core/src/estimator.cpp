#include "contamix/estimator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "contamix/parallel.hpp"
#include "kernel_eval.hpp"

namespace contamix {
namespace {

std::size_t isqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_table_index(const ContrastTable& table, std::size_t mu_index) {
  if (mu_index >= table.shift_sums.size()) {
    std::ostringstream msg;
    msg << "contrast: mu_index " << mu_index << " out of range (" << table.shift_sums.size()
        << " levels)";
    throw InvalidArgument(msg.str());
  }
}

void check_data(const Kernel& kernel, const Points& data, const char* what) {
  if (data.empty()) throw EmptyData(std::string(what) + ": data must be nonempty");
  if (data.dim() != kernel.dim()) {
    throw DimensionMismatch(std::string(what) + ": data dimension differs from kernel dimension");
  }
}

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();
};

}  // namespace

MixtureParams Grid::point(std::size_t lambda_index, std::size_t mu_index) const {
  const auto mu = mu_level(mu_index);
  return {lambda_levels_.at(lambda_index), std::vector<double>(mu.begin(), mu.end())};
}

Grid build_grid(std::size_t n, double bound, std::size_t dim) {
  if (n < 4) throw InvalidArgument("build_grid: n must be at least 4");
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw InvalidArgument("build_grid: bound M must be positive and finite");
  }
  if (dim == 0) throw InvalidArgument("build_grid: dimension must be positive");

  const double root = std::sqrt(static_cast<double>(n));
  const std::size_t lambda_count = isqrt(n);
  // Relative slack keeps exact products such as 0.5 * sqrt(16) from flooring down.
  const double k_real = std::floor(bound * root * (1.0 + 1e-12));
  const double per_axis = 2.0 * k_real;
  const double total = std::pow(per_axis, static_cast<double>(dim)) * static_cast<double>(lambda_count);
  if (!(total <= kMaxGridPoints)) {
    std::ostringstream msg;
    msg << "build_grid: " << total << " grid points exceed the limit of " << kMaxGridPoints;
    throw GridOverflow(msg.str());
  }
  if (k_real < 1.0) throw InvalidArgument("build_grid: M * sqrt(n) must be at least 1");

  Grid grid;
  grid.n_ = n;
  grid.bound_ = bound;
  grid.dim_ = dim;
  grid.k_max_ = static_cast<std::size_t>(k_real);

  grid.lambda_levels_.resize(lambda_count);
  for (std::size_t i = 0; i < lambda_count; ++i) {
    grid.lambda_levels_[i] = static_cast<double>(i + 1) / root;
  }

  const std::size_t k = grid.k_max_;
  std::vector<double> axis(2 * k);
  for (std::size_t j = 0; j < k; ++j) {
    const double v = static_cast<double>(j + 1) / root;
    axis[k - 1 - j] = -v;
    axis[k + j] = v;
  }

  const std::size_t levels = static_cast<std::size_t>(std::llround(std::pow(per_axis, dim)));
  grid.mu_coords_.resize(levels * dim);
  std::vector<std::size_t> digit(dim, 0);
  for (std::size_t m = 0; m < levels; ++m) {
    for (std::size_t c = 0; c < dim; ++c) grid.mu_coords_[m * dim + c] = axis[digit[c]];
    for (std::size_t c = dim; c-- > 0;) {
      if (++digit[c] < axis.size()) break;
      digit[c] = 0;
    }
  }
  return grid;
}

std::vector<double> grid_inner_products(const Kernel& kernel, const Grid& grid,
                                        const ScanOptions& options) {
  if (grid.dim() != kernel.dim()) {
    throw DimensionMismatch("grid_inner_products: grid dimension differs from kernel dimension");
  }
  std::vector<double> out(grid.mu_count());
  parallel_chunks(out.size(), options.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) out[m] = cross_inner(kernel, grid.mu_level(m));
  });
  return out;
}

ContrastTable precompute(const Kernel& kernel, const Grid& grid, const Points& data,
                         const ScanOptions& options) {
  return precompute(kernel, grid, data, grid_inner_products(kernel, grid, options), options);
}

ContrastTable precompute(const Kernel& kernel, const Grid& grid, const Points& data,
                         std::span<const double> inner_products, const ScanOptions& options) {
  check_data(kernel, data, "precompute");
  if (grid.dim() != kernel.dim()) {
    throw DimensionMismatch("precompute: grid dimension differs from kernel dimension");
  }
  if (inner_products.size() != grid.mu_count()) {
    throw InvalidArgument("precompute: need one inner product per shift level");
  }

  ContrastTable table;
  table.sample_size = data.size();
  table.self_norm = self_inner(kernel);
  table.inner_cache.assign(inner_products.begin(), inner_products.end());
  table.shift_sums.assign(grid.mu_count(), 0.0);

  const std::size_t n = data.size();
  if (kernel.dim() == 1) {
    const std::span<const double> x = data.coords();
    detail::with_density(kernel, [&](auto density) {
      double s0 = 0.0;
      for (std::size_t i = 0; i < n; ++i) s0 += density(x[i]);
      table.s0 = s0;
      parallel_chunks(grid.mu_count(), options.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t m = begin; m < end; ++m) {
          const double mu = grid.mu_level(m)[0];
          double sum = 0.0;
          for (std::size_t i = 0; i < n; ++i) sum += density(x[i] - mu);
          table.shift_sums[m] = sum;
        }
      });
      return 0;
    });
    return table;
  }

  double s0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) s0 += pdf(kernel, data[i]);
  table.s0 = s0;
  parallel_chunks(grid.mu_count(), options.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> shifted(kernel.dim());
    for (std::size_t m = begin; m < end; ++m) {
      const auto mu = grid.mu_level(m);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto xi = data[i];
        for (std::size_t c = 0; c < shifted.size(); ++c) shifted[c] = xi[c] - mu[c];
        sum += pdf(kernel, shifted);
      }
      table.shift_sums[m] = sum;
    }
  });
  return table;
}

double contrast(double lambda, const ContrastTable& table, std::size_t mu_index) {
  check_table_index(table, mu_index);
  const double n = static_cast<double>(table.sample_size);
  const double keep = 1.0 - lambda;
  return -2.0 / n * (keep * table.s0 + lambda * table.shift_sums[mu_index]) +
         (lambda * lambda + keep * keep) * table.self_norm +
         2.0 * lambda * keep * table.inner_cache[mu_index];
}

double contrast(const MixtureParams& theta, const ContrastTable& table, std::size_t mu_index) {
  return contrast(theta.lambda, table, mu_index);
}

double contrast_naive(const Kernel& kernel, const MixtureParams& theta, const Points& data) {
  check_data(kernel, data, "contrast_naive");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) sum += mixture_pdf(kernel, theta, data[i]);
  return -2.0 / static_cast<double>(data.size()) * sum + mixture_l2_norm_sq(kernel, theta);
}

EstimateResult argmin_contrast(const Grid& grid, const ContrastTable& table,
                               const ScanOptions& options) {
  if (table.shift_sums.size() != grid.mu_count()) {
    throw InvalidArgument("argmin_contrast: table does not match grid");
  }
  const std::size_t q = grid.mu_count();
  const std::size_t total = grid.size();
  const auto lambdas = grid.lambda_levels();

  std::vector<Best> partial(chunk_count(total, options.workers));
  parallel_chunks(total, options.workers,
                  [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                    Best best;
                    for (std::size_t flat = begin; flat < end; ++flat) {
                      const double v = contrast(lambdas[flat / q], table, flat % q);
                      if (v < best.value) best = {v, flat};
                    }
                    partial[chunk] = best;
                  });

  // Chunks are in canonical order, so a strict comparison keeps the earliest tie.
  Best best;
  for (const Best& b : partial) {
    if (b.value < best.value) best = b;
  }
  if (best.index == std::numeric_limits<std::size_t>::max()) {
    throw NumericalFault("argmin_contrast: no finite contrast value on the grid");
  }

  EstimateResult result;
  result.lambda_index = best.index / q;
  result.mu_index = best.index % q;
  result.lambda_hat = lambdas[result.lambda_index];
  const auto mu = grid.mu_level(result.mu_index);
  result.mu_hat.assign(mu.begin(), mu.end());
  result.contrast_value = best.value;
  return result;
}

EstimateResult estimate(const Kernel& kernel, const Points& data, double bound,
                        const ScanOptions& options) {
  check_data(kernel, data, "estimate");
  const Grid grid = build_grid(data.size(), bound, data.dim());
  const ContrastTable table = precompute(kernel, grid, data, options);
  return argmin_contrast(grid, table, options);
}

}  // namespace contamix
