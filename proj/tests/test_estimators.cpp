#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "shs/adaptive.hpp"
#include "shs/builtin_models.hpp"
#include "shs/estimators.hpp"
#include "test_models.hpp"

using Catch::Matchers::WithinAbs;

namespace {

const double kOracle = 2.0 * shs::normal_cdf(1.0) - 1.0;

std::vector<double> slope_input(const std::vector<shs::LevelStats>& rows, bool variance) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(variance ? r.variance : std::abs(r.mean));
  return out;
}

}  // namespace

TEST_CASE("cost per sample") {
  CHECK(shs::cost_per_sample(0, 1) == 1);
  CHECK(shs::cost_per_sample(0, 4) == 4);
  CHECK(shs::cost_per_sample(1, 1) == 3);
  CHECK(shs::cost_per_sample(5, 2) == 3 * 2 * 16);
}

TEST_CASE("empirical mean and 1/N variance") {
  const std::vector<double> pair{0.1, -0.1};
  const auto s = shs::summarize(pair, 3, 12);
  CHECK(s.mean == 0.0);
  CHECK_THAT(s.variance, WithinAbs(0.01, 1e-15));
  CHECK(s.samples == 2);
  CHECK(s.level == 3);
  CHECK(s.cost == 12);

  const std::vector<double> constant(77, -0.08);
  const auto c = shs::summarize(constant, 1, 0);
  CHECK(c.mean == -0.08);
  CHECK(c.variance == 0.0);
  CHECK_THROWS_AS(shs::summarize(std::vector<double>{}, 0, 0), std::invalid_argument);
}

TEST_CASE("plain Monte Carlo with constant and binary payoffs") {
  const auto model = shs::brownian_barrier_model(0.0, 1.0);
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const shs::NoiseStream noise(5);
  const shs::LevelParams lp(1, 4, 1.0);

  const auto constant = shs::smc_estimate(model, f, [](double) { return 0.3; }, lp, 500, noise);
  CHECK(constant.estimate == 0.3);
  CHECK(constant.variance == 0.0);
  CHECK(constant.cost == 500 * 16);

  const auto r = shs::smc_estimate(model, f, shs::indicator_payoff(1.0), lp, 1000, noise);
  std::size_t below = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto path = shs::sample_path(model, lp, noise, i);
    if (shs::evaluate_functional(f, path) <= 1.0) ++below;
  }
  CHECK(r.estimate == static_cast<double>(below) / 1000.0);
  const double p = r.estimate;
  CHECK_THAT(r.variance, WithinAbs(p * (1 - p) * 1000.0 / 999.0, 1e-12));
  CHECK_THROWS_AS(shs::smc_estimate(model, f, shs::indicator_payoff(1.0), lp, 0, noise),
                  std::invalid_argument);
}

TEST_CASE("plain Monte Carlo on the Brownian running maximum") {
  const auto model = shs::brownian_barrier_model(0.0, 1.0);
  const auto r = shs::smc_estimate(model, shs::RunningMax{0, 1.0}, shs::indicator_payoff(1.0),
                                   shs::LevelParams(1, 8, 1.0), 100000, shs::NoiseStream(3));
  CHECK_THAT(r.estimate, WithinAbs(kOracle, 0.02));
  // discrete monitoring overstates P(max <= 1); the shifted barrier law is much closer
  const double shifted = shs::brownian_max_cdf(0.0, 1.0, 1.0, 1.0 + 0.5826 / 16.0);
  CHECK(r.estimate > kOracle);
  CHECK_THAT(r.estimate, WithinAbs(shifted, 4.0 * std::sqrt(r.variance / 1e5) + 2e-3));
}

TEST_CASE("level corrections of deterministic models") {
  const auto model = shs::tcl_model(testing::quiet_tcl());
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const auto payoff = shs::smoothed_payoff(3, 20.3);
  const shs::NoiseStream noise(1);
  for (int level = 1; level <= 5; ++level) {
    const auto s = shs::level_correction_stats(model, f, payoff, level, 1, 1.0, 50, noise);
    const auto pair = shs::sample_coupled(model, level, 1, 1.0, noise, 0);
    const double expected = payoff(shs::evaluate_functional(f, pair.fine)) -
                            payoff(shs::evaluate_functional(f, pair.coarse));
    CHECK(s.variance == 0.0);
    CHECK_THAT(s.mean, WithinAbs(expected, 1e-15));
  }

  const auto still = testing::linear_model(0.0, 0.0, 2.0);
  for (int level = 1; level <= 4; ++level) {
    const auto s = shs::level_correction_stats(still, f, shs::smoothed_payoff(2, 2.1), level, 1,
                                               1.0, 20, noise);
    CHECK(s.mean == 0.0);
    CHECK(s.variance == 0.0);
  }
}

TEST_CASE("level samples are extended, never regenerated") {
  const auto model = shs::tcl_model(shs::TclParams{});
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const shs::NoiseStream noise(12);
  shs::LevelSamples grown;
  grown.level = 3;
  shs::extend_level_samples(grown, 100, model, f, 1, 1.0, noise);
  const auto first = grown.fine;
  shs::extend_level_samples(grown, 250, model, f, 1, 1.0, noise);
  shs::extend_level_samples(grown, 200, model, f, 1, 1.0, noise);  // no-op
  REQUIRE(grown.size() == 250);
  CHECK(std::equal(first.begin(), first.end(), grown.fine.begin()));

  shs::LevelSamples fresh;
  fresh.level = 3;
  shs::extend_level_samples(fresh, 250, model, f, 1, 1.0, noise, shs::Execution{4});
  CHECK(fresh.fine == grown.fine);
  CHECK(fresh.coarse == grown.coarse);
  CHECK(fresh.cost == grown.cost);
  CHECK(grown.cost == 250 * shs::cost_per_sample(3, 1));
}

TEST_CASE("telescoping sum of a deterministic model equals the finest payoff") {
  const auto model = shs::tcl_model(testing::quiet_tcl());
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const shs::NoiseStream noise(2);
  for (const auto& payoff : {shs::smoothed_payoff(3, 20.3), shs::indicator_payoff(20.3)}) {
    for (int L = 2; L <= 4; ++L) {
      const std::vector<std::size_t> n(static_cast<std::size_t>(L) + 1, 7);
      const auto est = shs::mlmc_estimate(model, f, payoff, n, 1, 1.0, noise);
      const auto finest = shs::sample_path(model, shs::LevelParams(1, L, 1.0), noise, 0);
      CHECK_THAT(est.estimate, WithinAbs(payoff(shs::evaluate_functional(f, finest)), 1e-12));
      CHECK(est.variance_bound == 0.0);
      CHECK(est.max_level() == L);
    }
  }
}

TEST_CASE("single-level multilevel estimate is plain Monte Carlo") {
  const auto model = shs::tcl_model(shs::TclParams{});
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const shs::NoiseStream noise(9);
  const auto payoff = shs::indicator_payoff(20.3);
  const std::vector<std::size_t> n{2000};
  const auto mlmc = shs::mlmc_estimate(model, f, payoff, n, 1, 1.0, noise);
  const auto smc = shs::smc_estimate(model, f, payoff, shs::LevelParams(1, 0, 1.0), 2000, noise);
  CHECK(mlmc.estimate == smc.estimate);
  CHECK(mlmc.cost() == smc.cost);
  CHECK_THROWS_AS(shs::mlmc_estimate(model, f, payoff, std::vector<std::size_t>{}, 1, 1.0, noise),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      shs::mlmc_estimate(model, f, payoff, std::vector<std::size_t>{10, 0}, 1, 1.0, noise),
      std::invalid_argument);
}

TEST_CASE("reported cost equals the Euler updates executed") {
  const auto model = shs::tcl_model(shs::TclParams{});
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const shs::NoiseStream noise(4);
  const std::vector<std::size_t> n{300, 200, 100, 50};
  const auto est = shs::mlmc_estimate(model, f, shs::smoothed_payoff(3, 20.3), n, 2, 1.0, noise);
  std::uint64_t expected = 0;
  for (std::size_t l = 0; l < n.size(); ++l) {
    const auto per = shs::cost_per_sample(static_cast<int>(l), 2);
    CHECK(est.levels[l].cost == n[l] * per);
    CHECK(est.levels[l].cost >= est.levels[l].samples);
    CHECK(est.levels[l].samples == n[l]);
    expected += n[l] * per;
  }
  CHECK(est.cost() == expected);

  shs::PathSampler sampler(model, noise);
  for (std::uint64_t i = 0; i < 50; ++i) sampler.sample_coupled(3, 2, 1.0, i);
  CHECK(sampler.steps_taken() == est.levels[3].cost);
}

TEST_CASE("multilevel and plain Monte Carlo agree on the thermostat") {
  const auto model = shs::tcl_model(shs::TclParams{});
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const auto payoff = shs::indicator_payoff(20.3);
  const int L = 6;
  const std::vector<std::size_t> n{4000, 4000, 4000, 3000, 3000, 2000, 2000};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto mlmc = shs::mlmc_estimate(model, f, payoff, n, 1, 1.0, shs::NoiseStream(seed));
    const auto smc = shs::smc_estimate(model, f, payoff, shs::LevelParams(1, L, 1.0), 10000,
                                       shs::NoiseStream(seed, 1));
    const double se = std::sqrt(mlmc.variance_bound + smc.variance / 10000.0);
    CHECK(std::abs(mlmc.estimate - smc.estimate) <= 3.0 * se);
  }
}

TEST_CASE("smoothed multilevel estimate of the Brownian running maximum") {
  const auto model = shs::brownian_barrier_model(0.0, 1.0);
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const auto payoff = shs::smoothed_payoff(5, 1.0);
  const int L = 7;
  // At L = 7 the grid maximum misses the barrier by about 0.5826 sqrt(dt),
  // which moves the target by ~0.025; compare with the shifted-barrier law.
  const double target = shs::brownian_max_cdf(0.0, 1.0, 1.0, 1.0 + 0.5826 * std::sqrt(1.0 / 128));
  for (std::uint64_t seed : {1u, 2u}) {
    std::vector<double> v;
    for (int l = 0; l <= L; ++l) {
      v.push_back(shs::level_correction_stats(model, f, payoff, l, 1, 1.0, 1000,
                                              shs::NoiseStream(seed, 9))
                      .variance);
    }
    auto n = shs::required_replications(v, shs::split_budget(0.02, 4, 2, 2), 2.0);
    for (auto& x : n) x = std::max<std::size_t>(x, 100);
    const auto est = shs::mlmc_estimate(model, f, payoff, n, 1, 1.0, shs::NoiseStream(seed));
    CHECK_THAT(est.estimate, WithinAbs(target, 0.02));
    CHECK(est.estimate > kOracle);
  }
}

TEST_CASE("thermostat variance decay with smoothing") {
  const auto model = shs::tcl_model(shs::TclParams{});
  const shs::PathFunctional f = shs::RunningMax{0, 1.0};
  const shs::NoiseStream noise(1);
  std::vector<shs::LevelStats> ind, m3, m4;
  for (int l = 1; l <= 6; ++l) {
    shs::LevelSamples s;
    s.level = l;
    shs::extend_level_samples(s, 10000, model, f, 1, 1.0, noise);
    ind.push_back(shs::summarize(shs::level_payoffs(s, shs::indicator_payoff(20.3)), l, s.cost));
    m3.push_back(shs::summarize(shs::level_payoffs(s, shs::smoothed_payoff(3, 20.3)), l, s.cost));
    m4.push_back(shs::summarize(shs::level_payoffs(s, shs::smoothed_payoff(4, 20.3)), l, s.cost));
  }
  const std::vector<int> levels{1, 2, 3, 4, 5, 6};
  for (std::size_t i = 2; i < m3.size(); ++i) CHECK(m3[i].variance < m3[i - 1].variance);
  CHECK(shs::fit_decay_rate(levels, slope_input(m3, true)).alpha > 0.0);
  CHECK(shs::fit_decay_rate(levels, slope_input(m4, true)).alpha > 0.0);
  // with m = 4 the variance peaks where sigma sqrt(dt) meets the band width
  // (level 4 here) and decreases strictly beyond that
  const auto peak = std::max_element(m4.begin(), m4.end(), [](const auto& a, const auto& b) {
    return a.variance < b.variance;
  });
  for (auto it = peak + 1; it != m4.end(); ++it) CHECK(it->variance < (it - 1)->variance);
  CHECK(m3.back().variance < ind.back().variance);
  CHECK(m4.back().variance < ind.back().variance);
}
