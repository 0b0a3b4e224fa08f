#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "contamix/kernels.hpp"

namespace contamix {

enum class ExperimentMode { phase_transition, rate_scaling };
enum class InnerProductMethod { quadrature, monte_carlo };

/// Declarative description of a Monte-Carlo study.
///
/// phase_transition: one row per nu at fixed n, with mu* = sqrt(1 / (lambda* n^nu)).
/// rate_scaling: one row per entry of n_values; mu* is mu_star_override when
/// set, otherwise derived from the single entry of nu_values.
struct ExperimentConfig {
  Kernel kernel = Kernel::gaussian();
  std::size_t n = 0;
  double lambda_star = 0.25;
  std::vector<double> nu_values;
  double bound = 10.0;
  std::size_t replicates = 200;
  std::uint64_t master_seed = 0;
  ExperimentMode mode = ExperimentMode::phase_transition;
  std::vector<std::size_t> n_values;
  std::optional<double> mu_star_override;
  /// monte_carlo estimates every grid inner product with n^2 (capped) draws.
  InnerProductMethod inner_products = InnerProductMethod::quadrature;
};

/// nu = k / 24 for k = 1..24.
std::vector<double> default_nu_values();

/// mu* = sqrt(1 / (lambda* n^nu)).
double mu_star_for(double lambda_star, std::size_t n, double nu);

/// Parses the flat `key = value` format; lists are comma separated and list
/// entries may be written as fractions p/q. `source` names the input in errors.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError when an invariant fails (replicates >= 1, nu in (0, 1],
/// every mu* <= M, mode-specific fields present).
void validate(const ExperimentConfig& config);

/// One output row of the study.
struct ExperimentCell {
  std::size_t n = 0;
  double nu = 0.0;  // NaN when mu* is overridden in rate_scaling mode
  double mu_star = 0.0;
};
std::vector<ExperimentCell> experiment_cells(const ExperimentConfig& config);

/// Seed of replicate `rep_index` in row `cell_index`:
///   mix(mix(mix(master) + cell_index) + rep_index)
/// with mix the SplitMix64 finaliser (increment 0x9e3779b97f4a7c15,
/// multipliers 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb, shifts 30/27/31).
std::uint64_t replicate_seed(std::uint64_t master, std::size_t cell_index, std::size_t rep_index);
std::uint64_t splitmix64(std::uint64_t x) noexcept;

struct ReplicateEstimate {
  double lambda_hat = 0.0;
  double mu_hat = 0.0;
};

/// Samples n points from f_{lambda*, mu*} of the cell and estimates (lambda, mu).
ReplicateEstimate run_replicate(const ExperimentConfig& config, std::size_t cell_index,
                                std::size_t rep_index);

struct RawEstimate {
  std::size_t cell = 0;
  std::size_t n = 0;
  double nu = 0.0;
  std::size_t rep = 0;
  double lambda_hat = 0.0;
  double mu_hat = 0.0;
};

struct SummaryRow {
  double nu = 0.0;
  double mu_star = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  double mse_lambda = 0.0;
  double mse_mu = 0.0;
};

struct ExperimentResult {
  ExperimentMode mode = ExperimentMode::phase_transition;
  std::vector<SummaryRow> rows;
  std::vector<RawEstimate> raw;
};

/// Per-row mean squared errors of the raw estimates, in (cell, rep) order.
ExperimentResult aggregate(const ExperimentConfig& config, std::vector<RawEstimate> raw);

/// Runs every (cell, replicate) pair on `workers` threads. Output does not depend on workers.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers = 1);

/// Summary header `nu,mu_star,n,replicates,mse_lambda,mse_mu`. Raw header
/// `nu,rep,lambda_hat,mu_hat`, with a leading `n` column in rate_scaling mode.
void write_summary_csv(const ExperimentResult& result, std::ostream& out);
void write_raw_csv(const ExperimentResult& result, std::ostream& out);
void emit_csv(const ExperimentResult& result, const std::filesystem::path& summary_path,
              const std::optional<std::filesystem::path>& raw_path);

std::vector<SummaryRow> parse_summary_csv(std::istream& in);

}  // namespace contamix
