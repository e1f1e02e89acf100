#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shs/experiments.hpp"
#include "shs/model.hpp"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitUnconverged = 2;
constexpr int kExitConfigError = 3;
constexpr int kExitRuntimeError = 4;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
  unsigned threads = 1;
};

void add_common(CLI::App& cmd, Options& opt, bool outputs) {
  cmd.add_option("--config", opt.config, "Experiment configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  if (!outputs) return;
  cmd.add_option("--seed", opt.seed, "Override the master seed");
  cmd.add_option("--out", opt.out, "Output directory (default: run.output_dir)");
  cmd.add_flag("--quiet", opt.quiet, "Suppress the summary on stdout");
  cmd.add_option("--threads", opt.threads, "Worker threads, 0 = all cores")->default_val(1);
}

shs::ExperimentConfig load(const Options& opt) {
  auto config = shs::load_config(opt.config);
  if (opt.seed) config.seed = *opt.seed;
  return config;
}

std::filesystem::path out_dir(const Options& opt, const shs::ExperimentConfig& config) {
  return std::filesystem::path(opt.out.empty() ? config.output_dir : opt.out);
}

void expect_mode(const shs::ExperimentConfig& config, shs::RunMode mode,
                 const std::string& command) {
  if (config.mode != mode) {
    throw shs::ConfigError({"run.mode is " + shs::to_string(config.mode) + " but `" + command +
                            "` needs " + shs::to_string(mode)});
  }
}

int estimate(const Options& opt) {
  const auto config = load(opt);
  if (config.mode == shs::RunMode::kDecayDiagnostics ||
      config.mode == shs::RunMode::kCostComparison) {
    throw shs::ConfigError({"run.mode " + shs::to_string(config.mode) +
                            " is not an estimate mode; use adaptive, fixed-mlmc or smc"});
  }
  const auto dir = out_dir(opt, config);
  const auto report = shs::run_estimate(config, shs::Execution{opt.threads}, dir);
  if (!opt.quiet) {
    std::cout << "estimate " << report.estimate << "  (m = " << report.smoothing_index
              << ", L = " << report.max_level << ", cost = " << report.total_cost
              << " steps)\n"
              << "status   " << report.status << "\n"
              << "wrote    " << (dir / "report.json").string() << ", "
              << (dir / "levels.csv").string() << "\n";
  }
  return report.converged ? kExitConverged : kExitUnconverged;
}

int decay(const Options& opt) {
  const auto config = load(opt);
  expect_mode(config, shs::RunMode::kDecayDiagnostics, "decay");
  const auto dir = out_dir(opt, config);
  const auto tables = shs::run_decay_diagnostics(config, shs::Execution{opt.threads}, dir);
  if (!opt.quiet) {
    for (const auto& t : tables) {
      std::cout << t.payoff << ": alpha_hat ";
      if (t.alpha_fitted) std::cout << t.alpha_hat; else std::cout << "n/a";
      std::cout << ", beta_hat ";
      if (t.beta_fitted) std::cout << t.beta_hat; else std::cout << "n/a";
      std::cout << "\n";
    }
    std::cout << "wrote decay tables to " << dir.string() << "\n";
  }
  return kExitConverged;
}

int cost_compare(const Options& opt) {
  const auto config = load(opt);
  expect_mode(config, shs::RunMode::kCostComparison, "cost-compare");
  const auto dir = out_dir(opt, config);
  const auto result = shs::run_cost_comparison(config, shs::Execution{opt.threads}, dir);
  bool all = true;
  if (!opt.quiet) std::cout << "alpha_bar " << result.alpha_bar << "\n";
  for (const auto& r : result.rows) {
    all = all && r.converged;
    if (!opt.quiet) {
      std::cout << "eps " << r.epsilon << ": smc " << r.smc_cost_model << ", mlmc "
                << r.mlmc_cost << ", gain " << r.gain << (r.converged ? "" : " (unconverged)")
                << "\n";
    }
  }
  return all ? kExitConverged : kExitUnconverged;
}

int validate(const Options& opt) {
  const auto config = shs::load_config(opt.config);
  const auto model = shs::build_model(config.model);
  const auto result = shs::validate_model(model);
  if (!result.ok()) {
    for (const auto& v : result.violations) std::cerr << "model: " << v << "\n";
    return kExitConfigError;
  }
  std::cout << "ok: " << model.name << ", " << model.mode_count() << " modes, mode "
            << shs::to_string(config.mode) << "\n";
  return kExitConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoothed multilevel Monte Carlo for stochastic hybrid systems"};
  app.require_subcommand(1);
  Options opt;
  auto* est = app.add_subcommand("estimate", "Adaptive, fixed-level MLMC or plain MC estimate");
  auto* dec = app.add_subcommand("decay", "Level-correction mean and variance decay tables");
  auto* cmp = app.add_subcommand("cost-compare", "Plain MC cost model against adaptive MLMC");
  auto* val = app.add_subcommand("validate", "Check a configuration and its model");
  add_common(*est, opt, true);
  add_common(*dec, opt, true);
  add_common(*cmp, opt, true);
  add_common(*val, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*est) return estimate(opt);
    if (*dec) return decay(opt);
    if (*cmp) return cost_compare(opt);
    return validate(opt);
  } catch (const shs::ConfigError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}
