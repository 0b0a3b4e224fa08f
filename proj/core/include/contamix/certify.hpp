#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contamix/kernels.hpp"
#include "contamix/mixture.hpp"

namespace contamix {

/// Outcome of a finite-grid certificate for one inequality.
///
/// `passed` is decided from `extremal_value` and `tolerance` by the rule stated
/// with each scan; secondary quantities live in `details`. The scanned surface
/// is kept so callers can write it out as CSV.
struct ScanReport {
  std::string check_name;
  std::string kernel;
  std::string grid_spec;
  double extremal_value = 0.0;
  std::vector<double> extremal_point;
  bool passed = false;
  double tolerance = 0.0;
  std::vector<std::pair<std::string, double>> details;

  std::vector<std::string> surface_columns;
  std::vector<std::vector<double>> surface;

  /// Value of a named detail; throws InvalidArgument if absent.
  double detail(std::string_view key) const;
};

/// key=value lines, one per field, details appended in insertion order.
std::string format_report(const ScanReport& report);
void write_surface_csv(const ScanReport& report, std::ostream& out);

/// ||phi - phi_mu||^2 / mu^2 = 2 (||phi||^2 - <phi, phi_mu>) / mu^2.
double kappa_ratio(const Kernel& kernel, double mu);

/// Two-sided norm-equivalence constants on mu in (0, M]: the ratio above is
/// evaluated at mu = M k / steps, k = 1..steps. extremal_value is the lower
/// constant; passes when it exceeds tolerance (0) and the upper one is finite.
ScanReport scan_kappa(const Kernel& kernel, double bound, std::size_t steps);

/// R(a, b) = |<phi - phi_a, phi_{a+b} - phi_a>| / (||phi - phi_a|| ||phi_{a+b} - phi_a||).
double cs_ratio(const Kernel& kernel, double a, double b);

/// Scans R on the lattice a, b in {range (k - steps/2) / (steps/2)} \ {0}.
///
/// extremal_value is max R over |a + b| >= diagonal_margin. The fitted
/// constant c_hat = min over a + b != 0 of (1 - R) / max(||phi - phi_{a+b}||^2, 1e-12)
/// is reported in details. Passes when extremal_value < 1 - tolerance and c_hat > 0.
ScanReport scan_cs_ratio(const Kernel& kernel, double range, std::size_t steps,
                         double diagonal_margin);

/// Minimum of ||f - f'||_2 / W_2^2 over distinct pairs from the grid
/// lambda = k / (lambda_steps + 1), mu = +-mu_range k / mu_steps, plus the
/// near-diagonal pairs theta' = theta + (1e-3, 1e-3). Passes when the minimum
/// exceeds tolerance (0).
ScanReport scan_l2w2(const Kernel& kernel, std::size_t lambda_steps, double mu_range,
                     std::size_t mu_steps);

/// ||f_theta - f_theta'||^2 / [(l - l')^2 |mu|^2 |mu'|^2 + l'^2 |mu'|^2 |mu - mu'|^2].
double crucial_ratio(const InnerProductCache& cache, const MixtureParams& theta,
                     const MixtureParams& theta_star);

/// Minimum of crucial_ratio over ordered distinct pairs of the scan_l2w2 grid.
ScanReport scan_crucial_inequality(const Kernel& kernel, std::size_t lambda_steps,
                                   double mu_range, std::size_t mu_steps);

/// Relative threshold on <phi, phi_a> / ||phi||^2 at the last scanned shift.
double decorrelation_threshold(Family family) noexcept;

/// Tabulates <phi, phi_a>. extremal_value is the value at the last a and
/// tolerance is decorrelation_threshold * ||phi||^2; passes when below it.
ScanReport decorrelation_profile(const Kernel& kernel, const std::vector<double>& a_values);

/// 0.5, 1, 2, 5, 10, 20, 50.
std::vector<double> default_decorrelation_shifts();

}  // namespace contamix
