#include <catch_amalgamated.hpp>

#include <cmath>

#include "shs/builtin_models.hpp"
#include "shs/functional.hpp"
#include "test_models.hpp"

using Catch::Matchers::WithinAbs;

namespace {

// z_k = k dt with dt = 0.25 over [0, 1]
shs::DiscretePath ramp_path() {
  return shs::sample_path(testing::ramp_model(1.0), shs::LevelParams(1, 2, 1.0),
                          shs::NoiseStream(0), 0);
}

}  // namespace

TEST_CASE("first exit time of a path that never leaves") {
  const auto path = shs::sample_path(testing::linear_model(0.0, 0.0, 0.5),
                                     shs::LevelParams(1, 3, 1.0), shs::NoiseStream(0), 0);
  const shs::FirstExitTime f{{shs::BoxInvariant::interval(0.0, 1.0)}, 1.0};
  CHECK(shs::evaluate_functional(f, path) == shs::kNeverExits);
  CHECK(std::isinf(shs::kNeverExits));
}

TEST_CASE("first exit time on the grid") {
  const auto path = ramp_path();
  const shs::FirstExitTime f{{shs::BoxInvariant::interval(-shs::kInf, 0.6)}, 1.0};
  CHECK(shs::evaluate_functional(f, path) == 0.75);
  // the safe set is closed: touching its boundary is not an exit
  const shs::FirstExitTime closed{{shs::BoxInvariant::interval(-shs::kInf, 0.5)}, 1.0};
  CHECK(shs::evaluate_functional(closed, path) == 0.75);
  // exit only after the horizon
  const shs::FirstExitTime late{{shs::BoxInvariant::interval(-shs::kInf, 0.6)}, 0.5};
  CHECK(shs::evaluate_functional(late, path) == shs::kNeverExits);
  // starting outside exits at time zero
  const shs::FirstExitTime outside{{shs::BoxInvariant::interval(1.0, 2.0)}, 1.0};
  CHECK(shs::evaluate_functional(outside, path) == 0.0);
}

TEST_CASE("running maximum and terminal value") {
  const auto path = ramp_path();
  CHECK(shs::evaluate_functional(shs::RunningMax{0, 1.0}, path) == 1.0);
  CHECK(shs::evaluate_functional(shs::RunningMax{0, 0.6}, path) == 0.5);
  CHECK(shs::evaluate_functional(shs::TerminalValue{0, 1.0}, path) == 1.0);
  CHECK(shs::evaluate_functional(shs::TerminalValue{0, 0.6}, path) == 0.5);

  const auto down = shs::sample_path(testing::ramp_model(-2.0), shs::LevelParams(1, 2, 1.0),
                                     shs::NoiseStream(0), 0);
  CHECK(shs::evaluate_functional(shs::RunningMax{0, 1.0}, down) == 0.0);
  CHECK(shs::evaluate_functional(shs::TerminalValue{0, 1.0}, down) == -2.0);
}

TEST_CASE("functional argument errors") {
  const auto path = ramp_path();
  CHECK_THROWS_AS(shs::evaluate_functional(shs::RunningMax{1, 1.0}, path), std::invalid_argument);
  CHECK_THROWS_AS(shs::evaluate_functional(shs::TerminalValue{0, 2.0}, path),
                  std::invalid_argument);
  CHECK_THROWS_AS(shs::evaluate_functional(shs::RunningMax{0, 0.0}, path), std::invalid_argument);
  const shs::FirstExitTime no_box{{}, 1.0};
  CHECK_THROWS_AS(shs::evaluate_functional(no_box, path), std::invalid_argument);
}

TEST_CASE("functional helpers") {
  shs::PathFunctional f = shs::RunningMax{0, 1.0};
  CHECK(shs::functional_horizon(f) == 1.0);
  CHECK(shs::functional_horizon(shs::with_horizon(f, 1.5)) == 1.5);
  CHECK(shs::functional_name(f) == "running_max");
  CHECK(shs::functional_name(shs::TerminalValue{}) == "terminal_value");
  CHECK(shs::functional_name(shs::FirstExitTime{}) == "first_exit_time");
}

TEST_CASE("functional values on random thermostat paths") {
  const auto model = shs::tcl_model(shs::TclParams{});
  const shs::NoiseStream noise(10);
  const double horizon = 1.0;
  const shs::FirstExitTime exit{{shs::BoxInvariant::interval(-shs::kInf, 20.3),
                                 shs::BoxInvariant::interval(-shs::kInf, 20.3)},
                                horizon};
  for (std::uint64_t rep = 0; rep < 500; ++rep) {
    const auto path = shs::sample_path(model, shs::LevelParams(1, 6, 1.5), noise, rep);
    const double t = shs::evaluate_functional(exit, path);
    CHECK((t <= horizon || t == shs::kNeverExits));
    const double y = shs::evaluate_functional(shs::RunningMax{0, horizon}, path);
    CHECK(y >= path.state(0)[0]);
    CHECK(shs::evaluate_functional(exit, path) == t);
    // leaving {theta <= 20.3} before the horizon is the same event as max > 20.3
    CHECK((t == shs::kNeverExits) == (y <= 20.3));
  }
}
