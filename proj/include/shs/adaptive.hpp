#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shs/estimators.hpp"
#include "shs/functional.hpp"
#include "shs/model.hpp"
#include "shs/parallel.hpp"

namespace shs {

/// Share of the target accuracy given to one error source:
/// smoothing <= a1 eps*, bias <= a2 eps*, variance <= a3^2 eps*^2.
struct ErrorBudget {
  double epsilon = 0.0;
  double a1 = 4.0;
  double a2 = 2.0;
  double a3 = 2.0;

  double epsilon_star() const;
  double smoothing_limit() const;  // a1 (C_r - 1) eps*, applied to the smoothing gap
  double bias_limit(double alpha) const;  // a2 (2^alpha - 1) eps*
  double variance_limit() const;   // a3^2 eps*^2
};

/// eps / (a1 + a2 + a3). Throws std::invalid_argument on non-positive input.
double split_budget(double epsilon, double a1, double a2, double a3);

/// Cost-optimal replication numbers before rounding:
/// sqrt(v_l / (2^l + 1)) * sum_j sqrt(v_j (2^j + 1)) / (a3^2 eps*^2).
/// Levels with v_l = 0 get 0. Throws std::invalid_argument if every v_l is 0
/// or any is negative.
std::vector<double> continuous_replications(std::span<const double> variances, double eps_star,
                                            double a3);

/// Ceiling of continuous_replications.
std::vector<std::size_t> required_replications(std::span<const double> variances, double eps_star,
                                               double a3);

struct RateFit {
  double alpha = 0.0;
  double c = 0.0;  // |b_l| ~ c 2^(-alpha l)
};

/// Least-squares fit of log2 |b_l| = log2 c - alpha l over the given levels.
/// Entries with |b_l| = 0 are skipped; throws std::invalid_argument when
/// fewer than two remain.
RateFit fit_decay_rate(std::span<const int> levels, std::span<const double> abs_means);

/// Geometric bias bound from the last two (L = 2) or three (L >= 3) level
/// corrections. abs_means[l] = |b_hat_l| for l = 0..L.
double bias_bound(std::span<const double> abs_means, double alpha, int max_level);

/// bound <= a2 (2^alpha - 1) eps*. Throws std::domain_error ("bias rate not
/// identified") when alpha <= 0.
bool bias_accepted(double bound, double alpha, double eps_star, double a2);

/// |mean over samples of g^m(y) - g^(m-1)(y)|.
double smoothing_gap(std::span<const double> samples, int index, double threshold);

struct AdaptiveConfig {
  ErrorBudget budget;
  int kappa = 1;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  std::size_t initial_samples = 100;
  int max_level = 14;
  int max_smoothing_index = 10;
  std::uint64_t max_cost = 10'000'000'000ull;
  Execution exec;
};

struct LevelRow {
  int level = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t cost = 0;
  double optimal_samples = 0.0;  // continuous allocation from the final variances
};

struct EstimateReport {
  double estimate = 0.0;
  int smoothing_index = 0;
  int max_level = 0;
  double epsilon = 0.0;
  double epsilon_star = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double threshold = 0.0;
  double horizon = 0.0;
  double alpha_hat = 0.0;
  bool rate_defaulted = false;
  double bias_bound = 0.0;
  double variance_bound = 0.0;
  double smoothing_gap = 0.0;
  double bias_limit = 0.0;
  double variance_limit = 0.0;
  double smoothing_limit = 0.0;
  bool bias_ok = false;
  bool variance_ok = false;
  bool smoothing_ok = false;
  std::uint64_t total_cost = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::string status;
  std::vector<LevelRow> levels;
};

/// Horizon the adaptive run simulates: first-exit functionals are extended to
/// threshold + 2^-2 so every smoother it evaluates sees its full band.
double simulation_horizon(const PathFunctional& functional, double threshold);

/// Adaptive smoothed multilevel estimate of P(Y <= threshold). Never
/// throws on non-convergence; returns a report with converged = false.
EstimateReport adaptive_mlmc(const ShsModel& model, const PathFunctional& functional,
                             double threshold, const AdaptiveConfig& config);

}  // namespace shs
