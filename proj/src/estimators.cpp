#include "shs/estimators.hpp"

#include <atomic>
#include <stdexcept>

namespace shs {

std::uint64_t cost_per_sample(int level, int kappa) {
  const auto k = static_cast<std::uint64_t>(kappa);
  if (level == 0) return k;
  return 3 * k << (level - 1);
}

void extend_level_samples(LevelSamples& samples, std::size_t count, const ShsModel& model,
                          const PathFunctional& functional, int kappa, double horizon,
                          const NoiseStream& noise, const Execution& exec) {
  const std::size_t begin = samples.size();
  if (count <= begin) return;
  const int level = samples.level;
  samples.fine.resize(count);
  if (level > 0) samples.coarse.resize(count);

  std::atomic<std::uint64_t> steps{0};
  parallel_for(count - begin, exec, [&](unsigned, std::size_t lo, std::size_t hi) {
    PathSampler sampler(model, noise);
    if (level == 0) {
      const LevelParams params(kappa, 0, horizon);
      for (std::size_t j = lo; j < hi; ++j) {
        const std::size_t i = begin + j;
        samples.fine[i] = evaluate_functional(functional, sampler.sample(params, i));
      }
    } else {
      for (std::size_t j = lo; j < hi; ++j) {
        const std::size_t i = begin + j;
        const auto& pair = sampler.sample_coupled(level, kappa, horizon, i);
        samples.fine[i] = evaluate_functional(functional, pair.fine);
        samples.coarse[i] = evaluate_functional(functional, pair.coarse);
      }
    }
    steps += sampler.steps_taken();
  });
  samples.cost += steps.load();
}

std::vector<double> level_payoffs(const LevelSamples& samples, const Payoff& payoff) {
  std::vector<double> out(samples.size());
  if (samples.level == 0) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = payoff(samples.fine[i]);
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = payoff(samples.fine[i]) - payoff(samples.coarse[i]);
    }
  }
  return out;
}

LevelStats summarize(std::span<const double> values, int level, std::uint64_t cost) {
  if (values.empty()) throw std::invalid_argument("summarize: no samples");
  LevelStats s;
  s.level = level;
  s.samples = values.size();
  s.cost = cost;
  // Shifted by the first value so constant data gives exactly zero variance.
  const double n = static_cast<double>(values.size());
  const double shift = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - shift;
  const double centred = sum / n;
  s.mean = shift + centred;
  double sq = 0.0;
  for (double v : values) {
    const double d = (v - shift) - centred;
    sq += d * d;
  }
  s.variance = sq / n;
  return s;
}

SmcResult smc_estimate(const ShsModel& model, const PathFunctional& functional,
                       const Payoff& payoff, const LevelParams& params, std::size_t samples,
                       const NoiseStream& noise, const Execution& exec) {
  if (samples < 1) throw std::invalid_argument("smc_estimate: need N >= 1");
  std::vector<double> values(samples);
  std::atomic<std::uint64_t> steps{0};
  parallel_for(samples, exec, [&](unsigned, std::size_t lo, std::size_t hi) {
    PathSampler sampler(model, noise);
    for (std::size_t i = lo; i < hi; ++i) {
      values[i] = payoff(evaluate_functional(functional, sampler.sample(params, i)));
    }
    steps += sampler.steps_taken();
  });
  const auto stats = summarize(values, params.level(), steps.load());
  SmcResult r;
  r.estimate = stats.mean;
  r.samples = samples;
  r.cost = stats.cost;
  r.variance = samples > 1 ? stats.variance * static_cast<double>(samples) /
                                 static_cast<double>(samples - 1)
                           : 0.0;
  return r;
}

LevelStats level_correction_stats(const ShsModel& model, const PathFunctional& functional,
                                  const Payoff& payoff, int level, int kappa, double horizon,
                                  std::size_t samples, const NoiseStream& noise,
                                  const Execution& exec) {
  if (samples < 1) throw std::invalid_argument("level_correction_stats: need N >= 1");
  LevelSamples raw;
  raw.level = level;
  extend_level_samples(raw, samples, model, functional, kappa, horizon, noise, exec);
  return summarize(level_payoffs(raw, payoff), level, raw.cost);
}

std::uint64_t MlmcEstimate::cost() const {
  std::uint64_t total = 0;
  for (const auto& l : levels) total += l.cost;
  return total;
}

MlmcEstimate combine_levels(std::vector<LevelStats> levels) {
  MlmcEstimate est;
  for (const auto& l : levels) {
    est.estimate += l.mean;
    est.variance_bound += l.variance / static_cast<double>(l.samples);
  }
  est.levels = std::move(levels);
  return est;
}

MlmcEstimate mlmc_estimate(const ShsModel& model, const PathFunctional& functional,
                           const Payoff& payoff, std::span<const std::size_t> samples, int kappa,
                           double horizon, const NoiseStream& noise, const Execution& exec) {
  if (samples.empty()) throw std::invalid_argument("mlmc_estimate: need at least level 0");
  std::vector<LevelStats> levels;
  for (std::size_t l = 0; l < samples.size(); ++l) {
    if (samples[l] < 1) throw std::invalid_argument("mlmc_estimate: every N_l must be >= 1");
    levels.push_back(level_correction_stats(model, functional, payoff, static_cast<int>(l), kappa,
                                            horizon, samples[l], noise, exec));
  }
  return combine_levels(std::move(levels));
}

}  // namespace shs
