#include "contamix/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "contamix/format.hpp"
#include "contamix/metrics.hpp"

namespace contamix {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNearDiagonalStep = 1e-3;
constexpr double kQuotientFloor = 1e-12;

void require_1d(const Kernel& kernel, const char* what) {
  if (kernel.dim() != 1) throw DimensionMismatch(std::string(what) + " scans one-dimensional kernels");
}

ScanReport make_report(std::string name, const Kernel& kernel, std::string grid_spec) {
  ScanReport r;
  r.check_name = std::move(name);
  r.kernel = kernel.descriptor();
  r.grid_spec = std::move(grid_spec);
  return r;
}

double kappa_from(double self, double cross, double mu) { return 2.0 * (self - cross) / (mu * mu); }

// R(a, b) from c(a), c(b), c(a + b) and ||phi||^2. <phi_u, phi_v> = c(v - u)
// and c is even, so N = c(a+b) - c(a) - c(b) + s and the squared norms are
// 2 (s - c(a)) and 2 (s - c(b)).
double cs_from(double s, double ca, double cb, double cab) {
  const double numerator = std::abs(cab - ca - cb + s);
  const double denominator = 2.0 * std::sqrt((s - ca) * (s - cb));
  return numerator / denominator;
}

struct PairGrid {
  std::vector<double> lambdas;
  std::vector<double> mus;
  std::vector<MixtureParams> points;
};

PairGrid pair_grid(std::size_t lambda_steps, double mu_range, std::size_t mu_steps,
                   const char* what) {
  if (lambda_steps == 0 || mu_steps == 0 || !(mu_range > 0.0)) {
    throw InvalidArgument(std::string(what) + ": steps and mu_range must be positive");
  }
  PairGrid g;
  for (std::size_t k = 1; k <= lambda_steps; ++k) {
    g.lambdas.push_back(static_cast<double>(k) / static_cast<double>(lambda_steps + 1));
  }
  for (std::size_t k = mu_steps; k >= 1; --k) {
    g.mus.push_back(-mu_range * static_cast<double>(k) / static_cast<double>(mu_steps));
  }
  for (std::size_t k = 1; k <= mu_steps; ++k) {
    g.mus.push_back(mu_range * static_cast<double>(k) / static_cast<double>(mu_steps));
  }
  for (double l : g.lambdas) {
    for (double m : g.mus) g.points.push_back(MixtureParams::scalar(l, m));
  }
  return g;
}

std::string pair_grid_spec(std::size_t lambda_steps, double mu_range, std::size_t mu_steps) {
  std::ostringstream out;
  out << "lambda=k/" << lambda_steps + 1 << " k=1.." << lambda_steps << "; mu=+-"
      << format_double(mu_range) << "*k/" << mu_steps << " k=1.." << mu_steps;
  return out.str();
}

}  // namespace

double ScanReport::detail(std::string_view key) const {
  for (const auto& [k, v] : details) {
    if (k == key) return v;
  }
  throw InvalidArgument("ScanReport: no detail named '" + std::string(key) + "'");
}

std::string format_report(const ScanReport& report) {
  std::ostringstream out;
  out << "check=" << report.check_name << '\n'
      << "kernel=" << report.kernel << '\n'
      << "grid=" << report.grid_spec << '\n'
      << "extremal_value=" << format_double(report.extremal_value) << '\n'
      << "extremal_point=" << format_vector(report.extremal_point) << '\n'
      << "tolerance=" << format_double(report.tolerance) << '\n';
  for (const auto& [k, v] : report.details) out << k << '=' << format_double(v) << '\n';
  out << "passed=" << (report.passed ? "true" : "false") << '\n';
  return out.str();
}

void write_surface_csv(const ScanReport& report, std::ostream& out) {
  for (std::size_t i = 0; i < report.surface_columns.size(); ++i) {
    if (i > 0) out << ',';
    out << report.surface_columns[i];
  }
  out << '\n';
  for (const auto& row : report.surface) out << format_vector(row) << '\n';
}

double kappa_ratio(const Kernel& kernel, double mu) {
  require_1d(kernel, "kappa_ratio");
  if (mu == 0.0) throw InvalidArgument("kappa_ratio: mu must be nonzero");
  return kappa_from(self_inner(kernel), cross_inner(kernel, mu), mu);
}

ScanReport scan_kappa(const Kernel& kernel, double bound, std::size_t steps) {
  require_1d(kernel, "scan_kappa");
  if (!(bound > 0.0)) throw InvalidArgument("scan_kappa: M must be positive");
  if (steps < 10) throw InvalidArgument("scan_kappa: at least 10 steps required");

  std::ostringstream spec;
  spec << "mu=" << format_double(bound) << "*k/" << steps << " k=1.." << steps;
  ScanReport r = make_report("kappa", kernel, spec.str());
  r.surface_columns = {"mu", "ratio"};

  const double s = self_inner(kernel);
  double lo = kInf;
  double hi = -kInf;
  double lo_at = 0.0;
  double hi_at = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double mu = bound * static_cast<double>(k) / static_cast<double>(steps);
    const double v = kappa_from(s, cross_inner(kernel, mu), mu);
    r.surface.push_back({mu, v});
    if (v < lo) {
      lo = v;
      lo_at = mu;
    }
    if (v > hi) {
      hi = v;
      hi_at = mu;
    }
  }
  r.extremal_value = lo;
  r.extremal_point = {lo_at};
  r.tolerance = 0.0;
  r.details = {{"kappa_lower", lo}, {"kappa_upper", hi}, {"kappa_upper_at", hi_at}};
  r.passed = lo > r.tolerance && std::isfinite(hi);
  return r;
}

double cs_ratio(const Kernel& kernel, double a, double b) {
  require_1d(kernel, "cs_ratio");
  if (a == 0.0 || b == 0.0) throw InvalidArgument("cs_ratio: a and b must be nonzero");
  return cs_from(self_inner(kernel), cross_inner(kernel, a), cross_inner(kernel, b),
                 cross_inner(kernel, a + b));
}

ScanReport scan_cs_ratio(const Kernel& kernel, double range, std::size_t steps,
                         double diagonal_margin) {
  require_1d(kernel, "scan_cs_ratio");
  if (!(diagonal_margin > 0.0)) throw InvalidArgument("scan_cs_ratio: margin must be positive");
  if (!(range > 0.0) || steps < 2 || steps % 2 != 0 || diagonal_margin >= 2.0 * range) {
    throw InvalidArgument("scan_cs_ratio: degenerate grid (need range > margin / 2, even steps >= 2)");
  }
  const auto half = static_cast<long>(steps / 2);
  // Lattice t_m = range * m / half for m in [-2 half, 2 half]; a, b and a + b all live on it.
  auto at = [&](long m) { return range * static_cast<double>(m) / static_cast<double>(half); };
  std::vector<double> c(static_cast<std::size_t>(4 * half + 1));
  for (long m = -2 * half; m <= 2 * half; ++m) {
    c[static_cast<std::size_t>(m + 2 * half)] = cross_inner(kernel, at(m));
  }
  auto c_of = [&](long m) { return c[static_cast<std::size_t>(m + 2 * half)]; };
  const double s = c_of(0);

  std::ostringstream spec;
  spec << "a,b=" << format_double(range) << "*k/" << half << " k=-" << half << ".." << half
       << " k!=0; margin=" << format_double(diagonal_margin);
  ScanReport r = make_report("cs", kernel, spec.str());
  r.surface_columns = {"a", "b", "R"};

  double off_max = -kInf;
  std::vector<double> off_at;
  double all_max = -kInf;
  double diag_dev = 0.0;
  double c_hat = kInf;
  std::vector<double> c_hat_at;
  for (long i = -half; i <= half; ++i) {
    if (i == 0) continue;
    for (long j = -half; j <= half; ++j) {
      if (j == 0) continue;
      const double a = at(i);
      const double b = at(j);
      const double ratio = cs_from(s, c_of(i), c_of(j), c_of(i + j));
      r.surface.push_back({a, b, ratio});
      all_max = std::max(all_max, ratio);
      if (i + j == 0) {
        diag_dev = std::max(diag_dev, std::abs(ratio - 1.0));
        continue;
      }
      const double sum = at(i + j);
      if (std::abs(sum) >= diagonal_margin && ratio > off_max) {
        off_max = ratio;
        off_at = {a, b};
      }
      const double q = (1.0 - ratio) / std::max(2.0 * (s - c_of(i + j)), kQuotientFloor);
      if (q < c_hat) {
        c_hat = q;
        c_hat_at = {a, b};
      }
    }
  }
  if (off_at.empty()) throw InvalidArgument("scan_cs_ratio: no lattice point outside the diagonal margin");

  r.extremal_value = off_max;
  r.extremal_point = off_at;
  r.tolerance = 0.0;
  r.details = {{"c_hat", c_hat},
               {"c_hat_a", c_hat_at.empty() ? 0.0 : c_hat_at[0]},
               {"c_hat_b", c_hat_at.empty() ? 0.0 : c_hat_at[1]},
               {"max_ratio", all_max},
               {"max_diagonal_deviation", diag_dev}};
  r.passed = off_max < 1.0 - r.tolerance && c_hat > 0.0;
  return r;
}

ScanReport scan_l2w2(const Kernel& kernel, std::size_t lambda_steps, double mu_range,
                     std::size_t mu_steps) {
  require_1d(kernel, "scan_l2w2");
  const PairGrid g = pair_grid(lambda_steps, mu_range, mu_steps, "scan_l2w2");
  const InnerProductCache cache(kernel);
  ScanReport r = make_report("l2w2", kernel, pair_grid_spec(lambda_steps, mu_range, mu_steps) +
                                                 "; near-diagonal step 1e-3");
  r.surface_columns = {"lambda1", "mu1", "lambda2", "mu2", "ratio"};

  auto ratio_of = [&](const MixtureParams& t1, const MixtureParams& t2) {
    const double w2sq = w2_squared(MixingDistribution::from(t1), MixingDistribution::from(t2));
    const double l2 = std::sqrt(l2_distance_sq(cache, t1, t2));
    if (w2sq == 0.0) throw NumericalFault("scan_l2w2: distinct pair with zero W2");
    return l2 / w2sq;
  };

  double best = kInf;
  std::vector<double> best_at;
  auto visit = [&](const MixtureParams& t1, const MixtureParams& t2) {
    const double v = ratio_of(t1, t2);
    r.surface.push_back({t1.lambda, t1.mu[0], t2.lambda, t2.mu[0], v});
    if (v < best) {
      best = v;
      best_at = {t1.lambda, t1.mu[0], t2.lambda, t2.mu[0]};
    }
    return v;
  };

  for (std::size_t i = 0; i < g.points.size(); ++i) {
    for (std::size_t j = i + 1; j < g.points.size(); ++j) visit(g.points[i], g.points[j]);
  }
  double near_lo = kInf;
  double near_hi = -kInf;
  for (const auto& t : g.points) {
    if (t.lambda + kNearDiagonalStep > 1.0) continue;
    const auto t2 = MixtureParams::scalar(t.lambda + kNearDiagonalStep, t.mu[0] + kNearDiagonalStep);
    const double v = visit(t, t2);
    near_lo = std::min(near_lo, v);
    near_hi = std::max(near_hi, v);
  }

  r.extremal_value = best;
  r.extremal_point = best_at;
  r.tolerance = 0.0;
  r.details = {{"c_phi_hat", best}, {"near_diagonal_min", near_lo}, {"near_diagonal_max", near_hi}};
  r.passed = best > r.tolerance && std::isfinite(best);
  return r;
}

double crucial_ratio(const InnerProductCache& cache, const MixtureParams& theta,
                     const MixtureParams& theta_star) {
  if (theta.dim() != 1 || theta_star.dim() != 1) {
    throw DimensionMismatch("crucial_ratio: one-dimensional parameters only");
  }
  const double l = theta.lambda;
  const double ls = theta_star.lambda;
  const double m = theta.mu[0];
  const double ms = theta_star.mu[0];
  const double denominator =
      (l - ls) * (l - ls) * m * m * ms * ms + ls * ls * ms * ms * (m - ms) * (m - ms);
  const double numerator = l2_distance_sq(cache, theta, theta_star);
  if (denominator == 0.0) return kInf;
  return numerator / denominator;
}

ScanReport scan_crucial_inequality(const Kernel& kernel, std::size_t lambda_steps,
                                   double mu_range, std::size_t mu_steps) {
  require_1d(kernel, "scan_crucial_inequality");
  const PairGrid g = pair_grid(lambda_steps, mu_range, mu_steps, "scan_crucial_inequality");
  const InnerProductCache cache(kernel);
  ScanReport r =
      make_report("crucial", kernel, pair_grid_spec(lambda_steps, mu_range, mu_steps) + "; ordered pairs");
  r.surface_columns = {"lambda_hat", "mu_hat", "lambda_star", "mu_star", "ratio"};

  double best = kInf;
  std::vector<double> best_at;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    for (std::size_t j = 0; j < g.points.size(); ++j) {
      if (i == j) continue;
      const auto& t = g.points[i];
      const auto& ts = g.points[j];
      const double v = crucial_ratio(cache, t, ts);
      r.surface.push_back({t.lambda, t.mu[0], ts.lambda, ts.mu[0], v});
      if (v < best) {
        best = v;
        best_at = {t.lambda, t.mu[0], ts.lambda, ts.mu[0]};
      }
    }
  }
  r.extremal_value = best;
  r.extremal_point = best_at;
  r.tolerance = 0.0;
  r.details = {{"ratio_min", best}};
  r.passed = best > r.tolerance && std::isfinite(best);
  return r;
}

double decorrelation_threshold(Family family) noexcept {
  return family == Family::cauchy ? 5e-2 : 1e-4;
}

std::vector<double> default_decorrelation_shifts() { return {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}; }

ScanReport decorrelation_profile(const Kernel& kernel, const std::vector<double>& a_values) {
  require_1d(kernel, "decorrelation_profile");
  if (a_values.empty()) throw InvalidArgument("decorrelation_profile: no shifts given");
  for (std::size_t i = 0; i < a_values.size(); ++i) {
    if (!(a_values[i] > 0.0) || (i > 0 && !(a_values[i] > a_values[i - 1]))) {
      throw InvalidArgument("decorrelation_profile: shifts must be positive and increasing");
    }
  }
  ScanReport r = make_report("decorrelation", kernel, "a=" + format_vector(a_values));
  r.surface_columns = {"a", "inner", "relative"};
  const double s = self_inner(kernel);
  for (double a : a_values) {
    const double v = cross_inner(kernel, a);
    r.surface.push_back({a, v, v / s});
  }
  r.extremal_value = r.surface.back()[1];
  r.extremal_point = {a_values.back()};
  r.tolerance = decorrelation_threshold(kernel.family()) * s;
  r.details = {{"self_inner", s}, {"relative_final", r.surface.back()[2]}};
  r.passed = r.extremal_value < r.tolerance;
  return r;
}

}  // namespace contamix
