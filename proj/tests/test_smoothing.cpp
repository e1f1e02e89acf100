#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "shs/functional.hpp"
#include "shs/smoothing.hpp"

using Catch::Matchers::WithinAbs;

TEST_CASE("cubic step values") {
  CHECK(shs::smooth_step(0.0) == 0.5);
  CHECK(shs::smooth_step(1.0) == 0.0);
  CHECK(shs::smooth_step(-1.0) == 1.0);
  CHECK(shs::smooth_step(1.5) == 0.0);
  CHECK(shs::smooth_step(-7.0) == 1.0);
  CHECK_THAT(shs::smooth_step(0.5), WithinAbs(0.5 + (5.0 * 0.125 - 4.5) / 8.0, 1e-15));
  const double r = std::sqrt(3.0 / 5.0);
  CHECK_THAT(shs::smooth_step(-r), WithinAbs(0.5 + 6.0 * r / 8.0, 1e-9));
  CHECK_THAT(shs::smooth_step(r), WithinAbs(0.5 - 6.0 * r / 8.0, 1e-9));
  CHECK_THAT(shs::smooth_step(-r), WithinAbs(1.0809475019311125, 1e-9));
  CHECK_THAT(shs::smooth_step(r), WithinAbs(-0.0809475019311125, 1e-9));
}

TEST_CASE("cubic step extrema found by grid search") {
  double lo = 1.0, hi = 0.0, arg_lo = 0.0, arg_hi = 0.0;
  for (int i = -2000000; i <= 2000000; ++i) {
    const double x = i * 1e-6;
    const double g = shs::smooth_step(x);
    if (g < lo) lo = g, arg_lo = x;
    if (g > hi) hi = g, arg_hi = x;
  }
  const double r = std::sqrt(3.0 / 5.0);
  CHECK_THAT(arg_lo, WithinAbs(r, 2e-6));
  CHECK_THAT(arg_hi, WithinAbs(-r, 2e-6));
  CHECK_THAT(lo, WithinAbs(0.5 - 6.0 * r / 8.0, 1e-9));
  CHECK_THAT(hi, WithinAbs(0.5 + 6.0 * r / 8.0, 1e-9));
  CHECK(std::abs(lo) <= 1.081);
  CHECK(std::abs(hi) <= 1.081);
}

TEST_CASE("cubic step is continuous at the band edges") {
  for (double eps : {1e-6, 1e-9, 1e-12}) {
    CHECK_THAT(shs::smooth_step(1.0 - eps), WithinAbs(0.0, 10 * eps));
    CHECK_THAT(shs::smooth_step(-1.0 + eps), WithinAbs(1.0, 10 * eps));
  }
}

TEST_CASE("smoother is a scaled translate of the cubic step") {
  CHECK_THROWS_AS(shs::Smoother(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(shs::Smoother(3, shs::kInf), std::invalid_argument);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(-3.0, 3.0), s(-50.0, 50.0);
  std::uniform_int_distribution<int> index(1, 12);
  for (int i = 0; i < 1000; ++i) {
    const shs::Smoother sm(index(rng), s(rng));
    const double y = sm.threshold() + x(rng) * sm.delta();
    CHECK_THAT(sm(y), WithinAbs(shs::smooth_step((y - sm.threshold()) / sm.delta()), 1e-12));
    CHECK(shs::smooth_eval(sm, y) == sm(y));
  }
  CHECK(shs::Smoother(5, 0.0).delta() == 1.0 / 32.0);
  CHECK(shs::Smoother::kDegree == 3);
  CHECK(shs::Smoother::kRatio == 16.0);
}

TEST_CASE("smoothed payoff at and beyond the band") {
  const shs::Smoother sm(4, 20.3);
  CHECK(sm(20.3) == 0.5);
  CHECK(sm(20.3 + 2.0 * sm.delta()) == 0.0);
  CHECK(sm(20.3 - 2.0 * sm.delta()) == 1.0);
  CHECK(sm(shs::kNeverExits) == 0.0);
  CHECK(sm(-shs::kInf) == 1.0);
}

TEST_CASE("indicator payoff") {
  CHECK(shs::indicator_eval(1.0, 1.0) == 1.0);
  CHECK(shs::indicator_eval(1.0, 1.0 + 1e-12) == 0.0);
  CHECK(shs::indicator_eval(1.0, -5.0) == 1.0);
  CHECK(shs::indicator_eval(1.0, shs::kNeverExits) == 0.0);
  CHECK(shs::indicator_payoff(2.0)(2.0) == 1.0);
  CHECK(shs::smoothed_payoff(3, 2.0)(2.0) == 0.5);
}
