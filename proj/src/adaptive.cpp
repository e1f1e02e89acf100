#include "shs/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <variant>

#include "shs/smoothing.hpp"

namespace shs {
namespace {

constexpr int kInitialSmoothingIndex = 2;
constexpr int kInitialMaxLevel = 2;
constexpr double kDefaultRate = 0.5;

double level_weight(std::size_t level) { return std::ldexp(1.0, static_cast<int>(level)) + 1.0; }

}  // namespace

double split_budget(double epsilon, double a1, double a2, double a3) {
  if (!(epsilon > 0.0) || !(a1 > 0.0) || !(a2 > 0.0) || !(a3 > 0.0)) {
    throw std::invalid_argument("split_budget: epsilon and weights must be positive");
  }
  return epsilon / (a1 + a2 + a3);
}

double ErrorBudget::epsilon_star() const { return split_budget(epsilon, a1, a2, a3); }

double ErrorBudget::smoothing_limit() const {
  return a1 * (Smoother::kRatio - 1.0) * epsilon_star();
}

double ErrorBudget::bias_limit(double alpha) const {
  return a2 * (std::exp2(alpha) - 1.0) * epsilon_star();
}

double ErrorBudget::variance_limit() const {
  const double e = epsilon_star();
  return a3 * a3 * e * e;
}

std::vector<double> continuous_replications(std::span<const double> variances, double eps_star,
                                            double a3) {
  if (variances.empty()) throw std::invalid_argument("continuous_replications: no levels");
  double weighted = 0.0;
  for (std::size_t l = 0; l < variances.size(); ++l) {
    if (!(variances[l] >= 0.0)) {
      throw std::invalid_argument("continuous_replications: negative variance");
    }
    weighted += std::sqrt(variances[l] * level_weight(l));
  }
  if (weighted == 0.0) {
    throw std::invalid_argument("continuous_replications: all variances are zero");
  }
  const double scale = weighted / (a3 * a3 * eps_star * eps_star);
  std::vector<double> out(variances.size());
  for (std::size_t l = 0; l < variances.size(); ++l) {
    out[l] = std::sqrt(variances[l] / level_weight(l)) * scale;
  }
  return out;
}

std::vector<std::size_t> required_replications(std::span<const double> variances, double eps_star,
                                               double a3) {
  const auto cont = continuous_replications(variances, eps_star, a3);
  std::vector<std::size_t> out(cont.size());
  for (std::size_t l = 0; l < cont.size(); ++l) {
    out[l] = static_cast<std::size_t>(std::ceil(cont[l]));
  }
  return out;
}

RateFit fit_decay_rate(std::span<const int> levels, std::span<const double> abs_means) {
  if (levels.size() != abs_means.size()) {
    throw std::invalid_argument("fit_decay_rate: levels and means differ in length");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double b = std::abs(abs_means[i]);
    if (b > 0.0 && std::isfinite(b)) {
      x.push_back(levels[i]);
      y.push_back(std::log2(b));
    }
  }
  if (x.size() < 2) throw std::invalid_argument("fit_decay_rate: need two levels with |b| > 0");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_decay_rate: levels must be distinct");
  const double slope = sxy / sxx;
  return RateFit{-slope, std::exp2(my - slope * mx)};
}

double bias_bound(std::span<const double> abs_means, double alpha, int max_level) {
  if (max_level < 2 || static_cast<std::size_t>(max_level) >= abs_means.size()) {
    throw std::invalid_argument("bias_bound: need L >= 2 and |b_hat| for levels 0..L");
  }
  const auto b = [&](int l) { return std::abs(abs_means[static_cast<std::size_t>(l)]); };
  double bound = std::max(b(max_level), b(max_level - 1) / std::exp2(alpha));
  if (max_level >= 3) bound = std::max(bound, b(max_level - 2) / std::exp2(2.0 * alpha));
  return bound;
}

bool bias_accepted(double bound, double alpha, double eps_star, double a2) {
  if (!(alpha > 0.0)) throw std::domain_error("bias rate not identified");
  return bound <= a2 * (std::exp2(alpha) - 1.0) * eps_star;
}

double smoothing_gap(std::span<const double> samples, int index, double threshold) {
  if (samples.empty()) return 0.0;
  const Smoother current(index, threshold);
  const Smoother previous(index - 1, threshold);
  double sum = 0.0;
  for (double y : samples) sum += current(y) - previous(y);
  return std::abs(sum / static_cast<double>(samples.size()));
}

double simulation_horizon(const PathFunctional& functional, double threshold) {
  const double h = functional_horizon(functional);
  if (std::holds_alternative<FirstExitTime>(functional)) {
    return std::max(h, threshold + std::ldexp(1.0, -kInitialSmoothingIndex));
  }
  return h;
}

namespace {

struct NotConverged {
  std::string reason;
};

class AdaptiveController {
 public:
  AdaptiveController(const ShsModel& model, const PathFunctional& functional, double threshold,
                     const AdaptiveConfig& config)
      : model_(model),
        threshold_(threshold),
        config_(config),
        horizon_(simulation_horizon(functional, threshold)),
        functional_(with_horizon(functional, horizon_)),
        noise_(config.seed, config.stream) {}

  EstimateReport run() {
    const auto& budget = config_.budget;
    budget.epsilon_star();  // validates the budget
    if (config_.kappa < 1) throw std::invalid_argument("adaptive_mlmc: kappa must be >= 1");
    try {
      index_ = kInitialSmoothingIndex;
      for (int l = 0; l <= kInitialMaxLevel; ++l) add_level(config_.initial_samples);
      refresh_stats();
      do {
        ++index_;
        if (index_ > config_.max_smoothing_index) throw NotConverged{"smoothing index cap reached"};
        refresh_stats();
        bool new_level = false;
        do {
          if (new_level) {
            if (max_level() + 1 > config_.max_level) throw NotConverged{"level cap reached"};
            add_level(config_.initial_samples);
            refresh_stats();
          }
          satisfy_variance();
          estimate_bias();
          new_level = true;
        } while (!bias_ok_);
        gap_ = smoothing_gap(samples_.back().fine, index_, threshold_);
        smoothing_ok_ = gap_ <= budget.smoothing_limit();
      } while (!smoothing_ok_);
      return report(true, "converged");
    } catch (const NotConverged& nc) {
      return report(false, nc.reason);
    }
  }

 private:
  int max_level() const { return static_cast<int>(samples_.size()) - 1; }

  std::uint64_t total_cost() const {
    std::uint64_t c = 0;
    for (const auto& s : samples_) c += s.cost;
    return c;
  }

  void add_level(std::size_t count) {
    LevelSamples s;
    s.level = static_cast<int>(samples_.size());
    samples_.push_back(std::move(s));
    grow(samples_.back(), count);
  }

  void grow(LevelSamples& s, std::size_t count) {
    if (count <= s.size()) return;
    const std::uint64_t extra = (count - s.size()) * cost_per_sample(s.level, config_.kappa);
    if (total_cost() + extra > config_.max_cost) throw NotConverged{"cost cap reached"};
    extend_level_samples(s, count, model_, functional_, config_.kappa, horizon_, noise_,
                         config_.exec);
  }

  void refresh_stats() {
    const Payoff payoff = smoothed_payoff(index_, threshold_);
    stats_.clear();
    for (const auto& s : samples_) {
      stats_.push_back(summarize(level_payoffs(s, payoff), s.level, s.cost));
    }
    variance_bound_ = combine_levels(stats_).variance_bound;
  }

  std::vector<double> variances() const {
    std::vector<double> v;
    for (const auto& s : stats_) v.push_back(s.variance);
    return v;
  }

  void satisfy_variance() {
    const auto& budget = config_.budget;
    do {
      const auto v = variances();
      const bool any_variance = std::any_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
      if (any_variance) {
        const auto target = required_replications(v, budget.epsilon_star(), budget.a3);
        for (std::size_t l = 0; l < samples_.size(); ++l) {
          if (v[l] == 0.0) continue;  // keep N_l
          grow(samples_[l], std::max(samples_[l].size(), target[l]));
        }
      }
      refresh_stats();
    } while (!(variance_bound_ <= budget.variance_limit()));
  }

  void estimate_bias() {
    const int top = max_level();
    std::vector<int> levels;
    std::vector<double> abs_means;
    for (int l = 1; l <= top; ++l) {
      const double b = std::abs(stats_[static_cast<std::size_t>(l)].mean);
      if (b > 0.0) {
        levels.push_back(l);
        abs_means.push_back(b);
      }
    }
    if (levels.size() >= 2) {
      alpha_ = fit_decay_rate(levels, abs_means).alpha;
      rate_defaulted_ = false;
    } else {
      alpha_ = kDefaultRate;
      rate_defaulted_ = true;
    }
    std::vector<double> all_means;
    for (const auto& s : stats_) all_means.push_back(std::abs(s.mean));
    bias_ = bias_bound(all_means, alpha_, top);
    bias_ok_ = alpha_ > 0.0 &&
               bias_accepted(bias_, alpha_, config_.budget.epsilon_star(), config_.budget.a2);
  }

  EstimateReport report(bool converged, std::string status) const {
    const auto& budget = config_.budget;
    EstimateReport r;
    const auto combined = combine_levels(stats_);
    r.estimate = combined.estimate;
    r.smoothing_index = index_;
    r.max_level = max_level();
    r.epsilon = budget.epsilon;
    r.epsilon_star = budget.epsilon_star();
    r.a1 = budget.a1;
    r.a2 = budget.a2;
    r.a3 = budget.a3;
    r.threshold = threshold_;
    r.horizon = horizon_;
    r.alpha_hat = alpha_;
    r.rate_defaulted = rate_defaulted_;
    r.bias_bound = bias_;
    r.variance_bound = combined.variance_bound;
    r.smoothing_gap = gap_;
    r.bias_limit = budget.bias_limit(alpha_);
    r.variance_limit = budget.variance_limit();
    r.smoothing_limit = budget.smoothing_limit();
    r.variance_ok = r.variance_bound <= r.variance_limit;
    r.bias_ok = bias_ok_;
    r.smoothing_ok = smoothing_ok_;
    r.total_cost = total_cost();
    r.seed = config_.seed;
    r.converged = converged;
    r.status = std::move(status);

    const auto v = variances();
    std::vector<double> optimal(v.size(), 0.0);
    if (std::any_of(v.begin(), v.end(), [](double x) { return x > 0.0; })) {
      optimal = continuous_replications(v, r.epsilon_star, budget.a3);
    }
    for (std::size_t l = 0; l < stats_.size(); ++l) {
      r.levels.push_back(LevelRow{stats_[l].level, stats_[l].samples, stats_[l].mean,
                                  stats_[l].variance, stats_[l].cost, optimal[l]});
    }
    return r;
  }

  const ShsModel& model_;
  double threshold_;
  AdaptiveConfig config_;
  double horizon_;
  PathFunctional functional_;
  NoiseStream noise_;

  int index_ = kInitialSmoothingIndex;
  std::vector<LevelSamples> samples_;
  std::vector<LevelStats> stats_;
  double variance_bound_ = 0.0;
  double alpha_ = 0.0;
  bool rate_defaulted_ = false;
  double bias_ = 0.0;
  bool bias_ok_ = false;
  double gap_ = 0.0;
  bool smoothing_ok_ = false;
};

}  // namespace

EstimateReport adaptive_mlmc(const ShsModel& model, const PathFunctional& functional,
                             double threshold, const AdaptiveConfig& config) {
  AdaptiveController controller(model, functional, threshold, config);
  return controller.run();
}

}  // namespace shs
