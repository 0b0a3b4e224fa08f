#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "contamix/kernels.hpp"
#include "contamix/mixture.hpp"
#include "contamix/points.hpp"

namespace contamix {

/// Candidate set for the minimum-contrast estimator.
///
/// lambda levels are i / sqrt(n) for i = 1..floor(sqrt(n)); each shift
/// coordinate takes the values +-k / sqrt(n) for k = 1..floor(M sqrt(n)).
///
/// Canonical enumeration: a grid point has flat index
/// lambda_index * mu_count() + mu_index. Within one coordinate the shift
/// values are listed -K, ..., -1, +1, ..., +K (times 1/sqrt(n)), i.e. negative
/// k descending then positive k ascending, which is ascending in value. For
/// d > 1 the shift levels form the Cartesian product with the first
/// coordinate varying slowest.
class Grid {
 public:
  std::size_t n() const noexcept { return n_; }
  double bound() const noexcept { return bound_; }
  std::size_t dim() const noexcept { return dim_; }
  /// floor(M sqrt(n)), the largest k per coordinate.
  std::size_t max_shift_index() const noexcept { return k_max_; }

  std::span<const double> lambda_levels() const noexcept { return lambda_levels_; }
  std::size_t lambda_count() const noexcept { return lambda_levels_.size(); }
  std::size_t mu_count() const noexcept { return mu_coords_.size() / dim_; }
  std::span<const double> mu_level(std::size_t i) const noexcept {
    return {mu_coords_.data() + i * dim_, dim_};
  }
  std::size_t size() const noexcept { return lambda_count() * mu_count(); }

  MixtureParams point(std::size_t lambda_index, std::size_t mu_index) const;

 private:
  friend Grid build_grid(std::size_t n, double bound, std::size_t dim);

  std::size_t n_ = 0;
  double bound_ = 0.0;
  std::size_t dim_ = 1;
  std::size_t k_max_ = 0;
  std::vector<double> lambda_levels_;
  std::vector<double> mu_coords_;
};

/// Largest number of grid points build_grid accepts.
inline constexpr double kMaxGridPoints = 1e9;

/// Throws InvalidArgument for n < 4, M <= 0 or d == 0 and GridOverflow past kMaxGridPoints.
Grid build_grid(std::size_t n, double bound, std::size_t dim = 1);

/// Sufficient statistics of the contrast: the data enter only through
/// sum_i phi(X_i) and sum_i phi(X_i - mu) for each shift level.
struct ContrastTable {
  double s0 = 0.0;
  std::vector<double> shift_sums;
  std::vector<double> inner_cache;
  double self_norm = 0.0;
  std::size_t sample_size = 0;
};

struct ScanOptions {
  /// Threads used for precomputation and the grid scan; results never depend on it.
  std::size_t workers = 1;
};

/// <phi, phi_mu> for every shift level of the grid.
std::vector<double> grid_inner_products(const Kernel& kernel, const Grid& grid,
                                        const ScanOptions& options = {});

ContrastTable precompute(const Kernel& kernel, const Grid& grid, const Points& data,
                         const ScanOptions& options = {});

/// As above with inner products supplied by the caller (one per shift level),
/// e.g. a cache shared by many samples on the same grid.
ContrastTable precompute(const Kernel& kernel, const Grid& grid, const Points& data,
                         std::span<const double> inner_products, const ScanOptions& options = {});

/// O(1) contrast gamma_n(lambda, mu_level[mu_index]) from the table.
double contrast(double lambda, const ContrastTable& table, std::size_t mu_index);
/// theta.mu must be the grid's mu_level(mu_index); only the index is used.
double contrast(const MixtureParams& theta, const ContrastTable& table, std::size_t mu_index);

/// Direct evaluation -(2/n) sum_i f_theta(X_i) + ||f_theta||^2.
double contrast_naive(const Kernel& kernel, const MixtureParams& theta, const Points& data);

struct EstimateResult {
  double lambda_hat = 0.0;
  std::vector<double> mu_hat;
  double contrast_value = 0.0;
  std::size_t lambda_index = 0;
  std::size_t mu_index = 0;

  friend bool operator==(const EstimateResult&, const EstimateResult&) = default;
};

/// Exhaustive argmin of the contrast over a prepared table. Ties go to the
/// smallest (lambda_index, mu_index) in canonical order.
EstimateResult argmin_contrast(const Grid& grid, const ContrastTable& table,
                               const ScanOptions& options = {});

/// Minimum-contrast estimate on the grid built with n = data.size().
EstimateResult estimate(const Kernel& kernel, const Points& data, double bound,
                        const ScanOptions& options = {});

}  // namespace contamix
