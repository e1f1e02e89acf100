#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "shs/functional.hpp"
#include "shs/model.hpp"
#include "shs/noise.hpp"
#include "shs/parallel.hpp"
#include "shs/simulate.hpp"
#include "shs/smoothing.hpp"

namespace shs {

/// Empirical statistics of one term of the telescoping sum.
struct LevelStats {
  int level = 0;
  std::size_t samples = 0;  // N_l
  double mean = 0.0;        // b_hat_l
  double variance = 0.0;    // v_hat_l, 1/N normalisation
  std::uint64_t cost = 0;   // Euler updates executed
};

/// Raw functional values of one level: fine[i] from the level-l path of
/// replication i, coarse[i] from its level-(l-1) partner (empty at level 0).
struct LevelSamples {
  int level = 0;
  std::vector<double> fine;
  std::vector<double> coarse;
  std::uint64_t cost = 0;

  std::size_t size() const { return fine.size(); }
};

/// Euler updates per replication: kappa at level 0, 3 kappa 2^(l-1) above.
std::uint64_t cost_per_sample(int level, int kappa);

/// Appends replications [samples.size(), count) of `level` to `samples`.
/// Replication i always uses noise addresses (level, i, .).
void extend_level_samples(LevelSamples& samples, std::size_t count, const ShsModel& model,
                          const PathFunctional& functional, int kappa, double horizon,
                          const NoiseStream& noise, const Execution& exec = {});

/// Payoff values g(fine) (level 0) or g(fine) - g(coarse), in replication order.
std::vector<double> level_payoffs(const LevelSamples& samples, const Payoff& payoff);

/// Mean and 1/N variance of `values`, summed in index order.
LevelStats summarize(std::span<const double> values, int level, std::uint64_t cost);

struct SmcResult {
  double estimate = 0.0;
  double variance = 0.0;  // unbiased sample variance of the payoffs
  std::uint64_t cost = 0;
  std::size_t samples = 0;
};

/// Plain Monte Carlo at one level: mean of g over N independent paths.
SmcResult smc_estimate(const ShsModel& model, const PathFunctional& functional,
                       const Payoff& payoff, const LevelParams& params, std::size_t samples,
                       const NoiseStream& noise, const Execution& exec = {});

/// b_hat and v_hat of level `level` from N fresh replications.
LevelStats level_correction_stats(const ShsModel& model, const PathFunctional& functional,
                                  const Payoff& payoff, int level, int kappa, double horizon,
                                  std::size_t samples, const NoiseStream& noise,
                                  const Execution& exec = {});

struct MlmcEstimate {
  double estimate = 0.0;
  std::vector<LevelStats> levels;  // contiguous 0..L
  double variance_bound = 0.0;     // sum_l v_hat_l / N_l

  int max_level() const { return static_cast<int>(levels.size()) - 1; }
  std::uint64_t cost() const;
};

/// Fixed-parameter multilevel estimator with replication numbers
/// samples[l], l = 0..L.
MlmcEstimate mlmc_estimate(const ShsModel& model, const PathFunctional& functional,
                           const Payoff& payoff, std::span<const std::size_t> samples, int kappa,
                           double horizon, const NoiseStream& noise, const Execution& exec = {});

/// Combines per-level statistics into a multilevel estimate.
MlmcEstimate combine_levels(std::vector<LevelStats> levels);

}  // namespace shs
