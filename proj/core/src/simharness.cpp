#include "contamix/simharness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "contamix/estimator.hpp"
#include "contamix/format.hpp"
#include "contamix/mixture.hpp"
#include "contamix/parallel.hpp"

namespace contamix {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& token, const std::string& key) {
  try {
    if (const auto slash = token.find('/'); slash != std::string::npos) {
      const double p = parse_double(std::string_view(token).substr(0, slash), key);
      const double q = parse_double(std::string_view(token).substr(slash + 1), key);
      if (q == 0.0) throw InvalidArgument("zero denominator");
      return p / q;
    }
    return parse_double(token, key);
  } catch (const InvalidArgument&) {
    throw ConfigError("config key '" + key + "': cannot parse '" + token + "' as a number");
  }
}

std::uint64_t parse_unsigned(const std::string& token, const std::string& key) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ConfigError("config key '" + key + "': cannot parse '" + token +
                      "' as a nonnegative integer");
  }
  return value;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "kernel", "alpha",      "n",          "lambda_star",      "M",
      "bound",  "replicates", "master_seed", "mode",            "nu_values",
      "n_values", "mu_star_override", "inner_products"};
  return keys;
}

struct GridCache {
  Grid grid;
  std::vector<double> inner;
};

GridCache make_grid_cache(const ExperimentConfig& config, std::size_t n) {
  GridCache cache{build_grid(n, config.bound, 1), {}};
  if (config.inner_products == InnerProductMethod::monte_carlo) {
    const std::uint64_t draws = replication_mc_draws(n);
    cache.inner.resize(cache.grid.mu_count());
    for (std::size_t m = 0; m < cache.grid.mu_count(); ++m) {
      cache.inner[m] =
          mc_inner(config.kernel, cache.grid.mu_level(m), draws, splitmix64(config.master_seed ^ m))
              .estimate;
    }
  } else {
    cache.inner = grid_inner_products(config.kernel, cache.grid);
  }
  return cache;
}

ReplicateEstimate estimate_cell(const ExperimentConfig& config, const ExperimentCell& cell,
                                std::size_t cell_index, std::size_t rep_index,
                                const GridCache& cache) {
  const auto theta = MixtureParams::scalar(config.lambda_star, cell.mu_star);
  const Points data = sample_mixture(config.kernel, theta, cell.n,
                                     replicate_seed(config.master_seed, cell_index, rep_index));
  const ContrastTable table = precompute(config.kernel, cache.grid, data, cache.inner);
  const EstimateResult est = argmin_contrast(cache.grid, table);
  return {est.lambda_hat, est.mu_hat[0]};
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::vector<double> default_nu_values() {
  std::vector<double> out;
  for (int k = 1; k <= 24; ++k) out.push_back(static_cast<double>(k) / 24.0);
  return out;
}

double mu_star_for(double lambda_star, std::size_t n, double nu) {
  return std::sqrt(1.0 / (lambda_star * std::pow(static_cast<double>(n), nu)));
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_number) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (!known_keys().contains(key)) {
      throw ConfigError(source + ":" + std::to_string(line_number) + ": unknown key '" + key + "'");
    }
    if (!values.emplace(key, value).second) {
      throw ConfigError(source + ":" + std::to_string(line_number) + ": duplicate key '" + key + "'");
    }
  }
  if (values.contains("M") && values.contains("bound")) {
    throw ConfigError(source + ": give either 'M' or 'bound', not both");
  }
  if (values.contains("bound")) values["M"] = values["bound"];

  auto require = [&](const std::string& key) -> const std::string& {
    const auto it = values.find(key);
    if (it == values.end() || it->second.empty()) {
      throw ConfigError(source + ": missing required key '" + key + "'");
    }
    return it->second;
  };

  ExperimentConfig config;
  if (const auto it = values.find("mode"); it != values.end()) {
    if (it->second == "phase_transition") {
      config.mode = ExperimentMode::phase_transition;
    } else if (it->second == "rate_scaling") {
      config.mode = ExperimentMode::rate_scaling;
    } else {
      throw ConfigError(source + ": key 'mode' must be phase_transition or rate_scaling");
    }
  }

  try {
    const Family family = parse_family(require("kernel"));
    std::optional<double> alpha;
    if (family == Family::skew_gaussian) alpha = parse_real(require("alpha"), "alpha");
    config.kernel = Kernel::make(family, alpha);
  } catch (const InvalidArgument& e) {
    throw ConfigError(source + ": " + e.what());
  }

  config.lambda_star = parse_real(require("lambda_star"), "lambda_star");
  config.bound = parse_real(require("M"), "M");
  config.replicates = parse_unsigned(require("replicates"), "replicates");
  config.master_seed = parse_unsigned(require("master_seed"), "master_seed");

  if (config.mode == ExperimentMode::phase_transition) {
    config.n = parse_unsigned(require("n"), "n");
  } else {
    for (const auto& token : split_list(require("n_values"))) {
      config.n_values.push_back(parse_unsigned(token, "n_values"));
    }
    if (const auto it = values.find("n"); it != values.end()) config.n = parse_unsigned(it->second, "n");
  }

  if (const auto it = values.find("nu_values"); it != values.end()) {
    for (const auto& token : split_list(it->second)) config.nu_values.push_back(parse_real(token, "nu_values"));
  } else if (config.mode == ExperimentMode::phase_transition) {
    config.nu_values = default_nu_values();
  }
  if (const auto it = values.find("mu_star_override"); it != values.end()) {
    config.mu_star_override = parse_real(it->second, "mu_star_override");
  }
  if (const auto it = values.find("inner_products"); it != values.end()) {
    if (it->second == "quadrature") {
      config.inner_products = InnerProductMethod::quadrature;
    } else if (it->second == "monte_carlo") {
      config.inner_products = InnerProductMethod::monte_carlo;
    } else {
      throw ConfigError(source + ": key 'inner_products' must be quadrature or monte_carlo");
    }
  }

  try {
    validate(config);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.string());
}

void validate(const ExperimentConfig& config) {
  if (config.kernel.dim() != 1) throw ConfigError("simulations are one-dimensional");
  if (config.replicates < 1) throw ConfigError("replicates must be at least 1");
  if (!(config.lambda_star > 0.0 && config.lambda_star <= 1.0)) {
    throw ConfigError("lambda_star must lie in (0, 1]");
  }
  if (!(config.bound > 0.0) || !std::isfinite(config.bound)) throw ConfigError("M must be positive");
  for (double nu : config.nu_values) {
    if (!(nu > 0.0 && nu <= 1.0)) throw ConfigError("nu values must lie in (0, 1]");
  }
  if (config.mode == ExperimentMode::phase_transition) {
    if (config.n < 4) throw ConfigError("n must be at least 4");
    if (config.nu_values.empty()) throw ConfigError("nu_values must not be empty");
  } else {
    if (config.n_values.empty()) throw ConfigError("rate_scaling requires n_values");
    for (auto n : config.n_values) {
      if (n < 4) throw ConfigError("every n in n_values must be at least 4");
    }
    if (!config.mu_star_override && config.nu_values.size() != 1) {
      throw ConfigError("rate_scaling needs mu_star_override or exactly one nu value");
    }
  }
  if (config.mu_star_override && !(*config.mu_star_override > 0.0)) {
    throw ConfigError("mu_star_override must be positive");
  }
  for (const auto& cell : experiment_cells(config)) {
    if (!(cell.mu_star <= config.bound)) {
      throw ConfigError("mu* = " + format_double(cell.mu_star) + " exceeds M = " +
                        format_double(config.bound));
    }
  }
}

std::vector<ExperimentCell> experiment_cells(const ExperimentConfig& config) {
  std::vector<ExperimentCell> cells;
  if (config.mode == ExperimentMode::phase_transition) {
    for (double nu : config.nu_values) {
      const double mu = config.mu_star_override.value_or(mu_star_for(config.lambda_star, config.n, nu));
      cells.push_back({config.n, nu, mu});
    }
    return cells;
  }
  for (auto n : config.n_values) {
    if (config.mu_star_override) {
      cells.push_back({n, std::numeric_limits<double>::quiet_NaN(), *config.mu_star_override});
    } else {
      const double nu = config.nu_values.front();
      cells.push_back({n, nu, mu_star_for(config.lambda_star, n, nu)});
    }
  }
  return cells;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t cell_index, std::size_t rep_index) {
  return splitmix64(splitmix64(splitmix64(master) + cell_index) + rep_index);
}

ReplicateEstimate run_replicate(const ExperimentConfig& config, std::size_t cell_index,
                                std::size_t rep_index) {
  validate(config);
  const auto cells = experiment_cells(config);
  if (cell_index >= cells.size() || rep_index >= config.replicates) {
    throw InvalidArgument("run_replicate: index out of range");
  }
  const GridCache cache = make_grid_cache(config, cells[cell_index].n);
  return estimate_cell(config, cells[cell_index], cell_index, rep_index, cache);
}

ExperimentResult aggregate(const ExperimentConfig& config, std::vector<RawEstimate> raw) {
  const auto cells = experiment_cells(config);
  ExperimentResult result;
  result.mode = config.mode;
  std::vector<double> sum_lambda(cells.size(), 0.0);
  std::vector<double> sum_mu(cells.size(), 0.0);
  std::vector<std::size_t> count(cells.size(), 0);
  std::stable_sort(raw.begin(), raw.end(), [](const RawEstimate& a, const RawEstimate& b) {
    return a.cell != b.cell ? a.cell < b.cell : a.rep < b.rep;
  });
  for (const auto& r : raw) {
    if (r.cell >= cells.size()) throw InvalidArgument("aggregate: cell index out of range");
    const double dl = r.lambda_hat - config.lambda_star;
    const double dm = r.mu_hat - cells[r.cell].mu_star;
    sum_lambda[r.cell] += dl * dl;
    sum_mu[r.cell] += dm * dm;
    ++count[r.cell];
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SummaryRow row{cells[c].nu, cells[c].mu_star, cells[c].n, count[c], 0.0, 0.0};
    if (count[c] > 0) {
      row.mse_lambda = sum_lambda[c] / static_cast<double>(count[c]);
      row.mse_mu = sum_mu[c] / static_cast<double>(count[c]);
    }
    result.rows.push_back(row);
  }
  result.raw = std::move(raw);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers) {
  validate(config);
  const auto cells = experiment_cells(config);

  std::map<std::size_t, GridCache> grids;
  for (const auto& cell : cells) {
    if (!grids.contains(cell.n)) grids.emplace(cell.n, make_grid_cache(config, cell.n));
  }

  const std::size_t reps = config.replicates;
  std::vector<RawEstimate> raw(cells.size() * reps);
  parallel_chunks(raw.size(), workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t item = begin; item < end; ++item) {
      const std::size_t c = item / reps;
      const std::size_t rep = item % reps;
      const auto est = estimate_cell(config, cells[c], c, rep, grids.at(cells[c].n));
      raw[item] = {c, cells[c].n, cells[c].nu, rep, est.lambda_hat, est.mu_hat};
    }
  });
  return aggregate(config, std::move(raw));
}

void write_summary_csv(const ExperimentResult& result, std::ostream& out) {
  out << "nu,mu_star,n,replicates,mse_lambda,mse_mu\n";
  for (const auto& r : result.rows) {
    out << format_double(r.nu) << ',' << format_double(r.mu_star) << ',' << r.n << ','
        << r.replicates << ',' << format_double(r.mse_lambda) << ',' << format_double(r.mse_mu)
        << '\n';
  }
}

void write_raw_csv(const ExperimentResult& result, std::ostream& out) {
  const bool with_n = result.mode == ExperimentMode::rate_scaling;
  out << (with_n ? "n,nu,rep,lambda_hat,mu_hat\n" : "nu,rep,lambda_hat,mu_hat\n");
  for (const auto& r : result.raw) {
    if (with_n) out << r.n << ',';
    out << format_double(r.nu) << ',' << r.rep << ',' << format_double(r.lambda_hat) << ','
        << format_double(r.mu_hat) << '\n';
  }
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& summary_path,
              const std::optional<std::filesystem::path>& raw_path) {
  {
    auto out = open_output(summary_path);
    write_summary_csv(result, out);
    if (!out.flush()) throw IoError("failed writing '" + summary_path.string() + "'");
  }
  if (raw_path) {
    auto out = open_output(*raw_path);
    write_raw_csv(result, out);
    if (!out.flush()) throw IoError("failed writing '" + raw_path->string() + "'");
  }
}

std::vector<SummaryRow> parse_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "nu,mu_star,n,replicates,mse_lambda,mse_mu") {
    throw InvalidArgument("summary CSV: unexpected header");
  }
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(trim(item));
    if (f.size() != 6) throw InvalidArgument("summary CSV: expected 6 fields in '" + line + "'");
    SummaryRow r;
    r.nu = parse_double(f[0], "nu");
    r.mu_star = parse_double(f[1], "mu_star");
    r.n = static_cast<std::size_t>(parse_double(f[2], "n"));
    r.replicates = static_cast<std::size_t>(parse_double(f[3], "replicates"));
    r.mse_lambda = parse_double(f[4], "mse_lambda");
    r.mse_mu = parse_double(f[5], "mse_mu");
    rows.push_back(r);
  }
  return rows;
}

}  // namespace contamix
