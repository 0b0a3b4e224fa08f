#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "contamix/certify.hpp"
#include "contamix/error.hpp"
#include "contamix/estimator.hpp"
#include "contamix/format.hpp"
#include "contamix/kernels.hpp"
#include "contamix/metrics.hpp"
#include "contamix/parallel.hpp"
#include "contamix/simharness.hpp"

namespace contamix::cli {
namespace {

const std::vector<std::string> kFamilies = {"gaussian", "laplace", "cauchy", "skew_gaussian"};

struct KernelFlags {
  std::string family = "gaussian";
  std::optional<double> alpha;
  std::size_t dim = 1;

  void add_to(CLI::App& cmd, bool with_dim) {
    cmd.add_option("--kernel", family, "Baseline density family")
        ->check(CLI::IsMember(kFamilies))
        ->capture_default_str();
    cmd.add_option("--alpha", alpha, "Skewness of skew_gaussian (nonzero)");
    if (with_dim) {
      cmd.add_option("--dim", dim, "Dimension (gaussian only above 1)")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
    }
  }

  Kernel build() const { return Kernel::make(parse_family(family), alpha, dim); }
};

std::vector<double> parse_coords(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.empty()) throw InvalidArgument(what + " must not be empty");
  return out;
}

int report_error(std::ostream& err, const std::exception& e, int code) {
  std::string msg = e.what();
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  err << "contamix: " << msg << '\n';
  return code;
}

void print_estimate(std::ostream& out, const EstimateResult& r, const Grid& grid) {
  out << "lambda_hat=" << format_double(r.lambda_hat) << '\n'
      << "mu_hat=" << format_vector(r.mu_hat) << '\n'
      << "contrast_value=" << format_double(r.contrast_value) << '\n'
      << "n=" << grid.n() << '\n'
      << "lambda_levels=" << grid.lambda_count() << '\n'
      << "mu_levels=" << grid.mu_count() << '\n'
      << "grid_points=" << grid.size() << '\n'
      << "lambda_index=" << r.lambda_index << '\n'
      << "mu_index=" << r.mu_index << '\n';
}

}  // namespace

Points read_points(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read data file '" + path + "'");
  Points points(dim);
  std::string line;
  std::size_t line_number = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    row.clear();
    std::stringstream ss(line);
    std::string field;
    try {
      while (std::getline(ss, field, ',')) row.push_back(parse_double(field, "coordinate"));
    } catch (const InvalidArgument& e) {
      throw DataError(path + ":" + std::to_string(line_number) + ": " + e.what());
    }
    if (row.size() != dim) {
      throw DataError(path + ":" + std::to_string(line_number) + ": expected " +
                      std::to_string(dim) + " coordinate(s), found " + std::to_string(row.size()));
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw DataError(path + ":" + std::to_string(line_number) + ": non-finite coordinate");
      }
    }
    points.push_back(row);
  }
  if (points.empty()) throw EmptyData("data file '" + path + "' contains no observations");
  return points;
}

std::size_t env_workers() {
  if (const char* env = std::getenv("CONTAMIX_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return default_workers();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum L2-contrast estimation for two-component contamination mixtures",
               "contamix"};
  app.require_subcommand(1);

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Estimate (lambda, mu) from a data file");
  KernelFlags estimate_kernel;
  estimate_kernel.add_to(*estimate_cmd, true);
  std::string data_path;
  double bound = 10.0;
  std::size_t estimate_workers = 0;
  estimate_cmd->add_option("--data", data_path, "Headerless CSV, one observation per line")->required();
  estimate_cmd->add_option("--bound,-M", bound, "Shift bound M")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  estimate_cmd->add_option("--workers", estimate_workers, "Threads (default: CONTAMIX_WORKERS)");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a Monte-Carlo study from a config file");
  std::string config_path;
  std::string summary_path;
  std::optional<std::string> raw_path;
  std::size_t sim_workers = 0;
  bool paper_preset = false;
  simulate_cmd->add_option("--config", config_path, "Experiment config file")->required();
  simulate_cmd->add_option("--out", summary_path, "Summary CSV path")->required();
  simulate_cmd->add_option("--raw", raw_path, "Per-replicate CSV path");
  simulate_cmd->add_option("--workers", sim_workers, "Threads (default: CONTAMIX_WORKERS)");
  simulate_cmd->add_flag("--paper", paper_preset, "Use 1000 replicates per row");

  // wasserstein
  auto* w_cmd = app.add_subcommand("wasserstein", "Transport distance between two mixing measures");
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::string mu1;
  std::string mu2;
  int order = 2;
  w_cmd->add_option("--lambda1", lambda1)->required()->check(CLI::Range(0.0, 1.0));
  w_cmd->add_option("--mu1", mu1, "Comma-separated coordinates")->required()->allow_extra_args(false);
  w_cmd->add_option("--lambda2", lambda2)->required()->check(CLI::Range(0.0, 1.0));
  w_cmd->add_option("--mu2", mu2, "Comma-separated coordinates")->required()->allow_extra_args(false);
  w_cmd->add_option("--p", order, "1 for W1, 2 for squared W2")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();

  // inner-product
  auto* ip_cmd = app.add_subcommand("inner-product", "<phi, phi(. - mu)> for a kernel");
  KernelFlags ip_kernel;
  ip_kernel.add_to(*ip_cmd, false);
  std::string ip_mu;
  std::string ip_method = "exact";
  std::uint64_t ip_draws = 1'000'000;
  std::uint64_t ip_seed = 1;
  ip_cmd->add_option("--mu", ip_mu, "Comma-separated shift")->required()->allow_extra_args(false);
  ip_cmd->add_option("--method", ip_method, "exact (closed form or quadrature) or mc")
      ->check(CLI::IsMember({"exact", "mc"}))
      ->capture_default_str();
  ip_cmd->add_option("--draws", ip_draws, "Monte-Carlo draws")->check(CLI::PositiveNumber);
  ip_cmd->add_option("--seed", ip_seed, "Monte-Carlo seed");

  // certify
  auto* cert_cmd = app.add_subcommand("certify", "Numerical scan of one structural inequality");
  KernelFlags cert_kernel;
  cert_kernel.add_to(*cert_cmd, false);
  std::string check;
  std::optional<std::string> surface_path;
  double cert_bound = 3.0;
  std::size_t kappa_steps = 300;
  double cs_range = 5.0;
  std::size_t cs_steps = 100;
  double cs_margin = 0.2;
  std::size_t lambda_steps = 9;
  double mu_range = 3.0;
  std::size_t mu_steps = 12;
  std::string shifts = "0.5,1,2,5,10,20,50";
  cert_cmd->add_option("--check", check)
      ->required()
      ->check(CLI::IsMember({"kappa", "cs", "l2w2", "crucial", "decorrelation"}));
  cert_cmd->add_option("--out", surface_path, "CSV of the scanned surface");
  cert_cmd->add_option("--bound,-M", cert_bound, "kappa: shift bound")->check(CLI::PositiveNumber);
  cert_cmd->add_option("--steps", kappa_steps, "kappa: grid steps")->check(CLI::Range(10, 100000000));
  cert_cmd->add_option("--range", cs_range, "cs: lattice half-width")->check(CLI::PositiveNumber);
  cert_cmd->add_option("--cs-steps", cs_steps, "cs: lattice steps (even)")->check(CLI::PositiveNumber);
  cert_cmd->add_option("--margin", cs_margin, "cs: diagonal margin")->check(CLI::PositiveNumber);
  cert_cmd->add_option("--lambda-steps", lambda_steps, "l2w2/crucial: lambda levels")
      ->check(CLI::PositiveNumber);
  cert_cmd->add_option("--mu-range", mu_range, "l2w2/crucial: shift range")->check(CLI::PositiveNumber);
  cert_cmd->add_option("--mu-steps", mu_steps, "l2w2/crucial: shift steps per sign")
      ->check(CLI::PositiveNumber);
  cert_cmd->add_option("--shifts", shifts, "decorrelation: increasing shifts");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kSuccess;
    }
    err << "contamix: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*estimate_cmd) {
      const Kernel kernel = estimate_kernel.build();
      const Points data = read_points(data_path, estimate_kernel.dim);
      const ScanOptions options{estimate_workers > 0 ? estimate_workers : env_workers()};
      const Grid grid = build_grid(data.size(), bound, data.dim());
      const ContrastTable table = precompute(kernel, grid, data, options);
      print_estimate(out, argmin_contrast(grid, table, options), grid);
      return kSuccess;
    }
    if (*simulate_cmd) {
      ExperimentConfig config = load_config(config_path);
      if (paper_preset) config.replicates = 1000;
      const ExperimentResult result =
          run_experiment(config, sim_workers > 0 ? sim_workers : env_workers());
      emit_csv(result, summary_path,
               raw_path ? std::optional<std::filesystem::path>(*raw_path) : std::nullopt);
      out << "summary=" << summary_path << '\n' << "rows=" << result.rows.size() << '\n';
      if (raw_path) out << "raw=" << *raw_path << '\n';
      return kSuccess;
    }
    if (*w_cmd) {
      const MixingDistribution g1{lambda1, parse_coords(mu1, "--mu1")};
      const MixingDistribution g2{lambda2, parse_coords(mu2, "--mu2")};
      if (order == 1) {
        out << "w1=" << format_double(w1(g1, g2)) << '\n';
      } else {
        out << "w2_squared=" << format_double(w2_squared(g1, g2)) << '\n';
      }
      return kSuccess;
    }
    if (*ip_cmd) {
      const std::vector<double> mu = parse_coords(ip_mu, "--mu");
      ip_kernel.dim = mu.size();
      const Kernel kernel = ip_kernel.build();
      if (ip_method == "mc") {
        const McEstimate est = mc_inner(kernel, mu, ip_draws, ip_seed);
        out << "inner_product=" << format_double(est.estimate) << '\n'
            << "std_error=" << (est.std_error ? format_double(*est.std_error) : "undefined") << '\n';
      } else {
        out << "inner_product=" << format_double(cross_inner(kernel, mu)) << '\n';
      }
      return kSuccess;
    }
    if (*cert_cmd) {
      const Kernel kernel = cert_kernel.build();
      ScanReport report;
      if (check == "kappa") {
        report = scan_kappa(kernel, cert_bound, kappa_steps);
      } else if (check == "cs") {
        report = scan_cs_ratio(kernel, cs_range, cs_steps, cs_margin);
      } else if (check == "l2w2") {
        report = scan_l2w2(kernel, lambda_steps, mu_range, mu_steps);
      } else if (check == "crucial") {
        report = scan_crucial_inequality(kernel, lambda_steps, mu_range, mu_steps);
      } else {
        report = decorrelation_profile(kernel, parse_coords(shifts, "--shifts"));
      }
      out << format_report(report);
      if (surface_path) {
        std::ofstream csv(*surface_path, std::ios::binary | std::ios::trunc);
        if (!csv) throw IoError("cannot open '" + *surface_path + "' for writing");
        write_surface_csv(report, csv);
        if (!csv.flush()) throw IoError("failed writing '" + *surface_path + "'");
      }
      return report.passed ? kSuccess : kCertificationFailed;
    }
  } catch (const InvalidArgument& e) {
    return report_error(err, e, kUsageError);
  } catch (const DimensionMismatch& e) {
    return report_error(err, e, kUsageError);
  } catch (const std::exception& e) {
    return report_error(err, e, kDataError);
  }
  return kUsageError;
}

}  // namespace contamix::cli
