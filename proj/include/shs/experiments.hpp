#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shs/adaptive.hpp"
#include "shs/builtin_models.hpp"
#include "shs/functional.hpp"
#include "shs/model.hpp"
#include "shs/parallel.hpp"

namespace shs {

/// Malformed or invalid experiment configuration. Each entry of problems()
/// names the offending field (or line/column for syntax errors).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class RunMode { kAdaptive, kFixedMlmc, kSmc, kDecayDiagnostics, kCostComparison };

std::string to_string(RunMode mode);

struct ModelSpec {
  std::string name = "tcl";  // "tcl" or "brownian"
  TclParams tcl;
  ModeUpdate mode_update = ModeUpdate::kDigitalController;
  double mu = 0.0;
  double sigma = 1.0;
  double barrier = kInf;
};

struct FunctionalSpec {
  std::string variant = "running_max";  // running_max, terminal_value, first_exit_time
  std::size_t coordinate = 0;
  double horizon = 1.0;
  double threshold = 0.0;
  std::vector<BoxInvariant> safe_set;  // first_exit_time only
};

struct ExperimentConfig {
  ModelSpec model;
  FunctionalSpec functional;
  RunMode mode = RunMode::kAdaptive;
  std::vector<double> epsilons;  // one entry except in cost-comparison
  double a1 = 4.0, a2 = 2.0, a3 = 2.0;
  int kappa = 1;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  // fixed-mlmc and smc
  std::string payoff = "smoothed";  // or "indicator"
  int smoothing_index = 5;
  int level = 8;
  std::size_t samples = 100000;
  std::vector<std::size_t> replications;

  // decay diagnostics
  int max_level = 6;
  std::size_t samples_per_level = 10000;
  std::vector<int> smoothing_indices{3, 4};

  // cost comparison pilot for the plain Monte Carlo rate
  int pilot_max_level = 6;
  std::size_t pilot_samples = 10000;

  // adaptive iteration caps
  int level_cap = 14;
  int smoothing_cap = 10;
  std::uint64_t cost_cap = 10'000'000'000ull;
};

/// Parses and validates a JSON configuration; `source` labels diagnostics.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);

ShsModel build_model(const ModelSpec& spec);
PathFunctional build_functional(const FunctionalSpec& spec);
AdaptiveConfig adaptive_config(const ExperimentConfig& config, double epsilon,
                               const Execution& exec);

struct DecayRow {
  int level = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t cost = 0;
};

struct DecayTable {
  std::string payoff;  // "indicator" or "m<index>"
  std::vector<DecayRow> rows;
  double alpha_hat = 0.0;  // slope of -log2 |b_hat_l|
  double beta_hat = 0.0;   // slope of -log2 v_hat_l
  bool alpha_fitted = false;
  bool beta_fitted = false;
};

struct CostRow {
  double epsilon = 0.0;
  double smc_cost_model = 0.0;  // eps^(-2 - 1/alpha_bar)
  double mlmc_cost = 0.0;       // Euler updates of the adaptive run
  double gain = 0.0;
  bool converged = false;
};

struct CostComparison {
  double alpha_bar = 0.0;
  std::vector<CostRow> rows;
  std::vector<EstimateReport> reports;
};

/// adaptive, fixed-mlmc or smc. Writes report.json and levels.csv.
EstimateReport run_estimate(const ExperimentConfig& config, const Execution& exec = {},
                            const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Level-correction statistics for the indicator and each smoothing index on
/// shared samples, levels 1..max_level. Writes decay_<payoff>.csv and
/// decay_summary.json.
std::vector<DecayTable> run_decay_diagnostics(
    const ExperimentConfig& config, const Execution& exec = {},
    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Indicator-payoff pilot for alpha_bar, then one adaptive run per epsilon.
/// Writes cost_comparison.csv and cost_comparison.json.
CostComparison run_cost_comparison(
    const ExperimentConfig& config, const Execution& exec = {},
    const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace shs
