#include <catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "shs/box_invariant.hpp"

using shs::BoxInvariant;
using shs::kInf;

TEST_CASE("box rejects empty or malformed bounds") {
  CHECK_THROWS_AS(BoxInvariant({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(BoxInvariant({2.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(BoxInvariant({0.0, 0.0}, {1.0}), std::invalid_argument);
  CHECK_NOTHROW(BoxInvariant::interval(-kInf, kInf));
}

TEST_CASE("membership is strict on every coordinate") {
  const BoxInvariant box({0.0, 0.0}, {1.0, 1.0});
  CHECK(box.contains(std::vector{0.5, 0.5}));
  CHECK_FALSE(box.contains(std::vector{0.0, 0.5}));
  CHECK_FALSE(box.contains(std::vector{0.5, 1.0}));
  CHECK(box.contains_closure(std::vector{0.0, 1.0}));
  CHECK_FALSE(box.contains_closure(std::vector{-1e-15, 0.5}));

  const auto half_line = BoxInvariant::interval(-kInf, 20.25);
  CHECK(half_line.contains(std::vector{-1e300}));
  CHECK_FALSE(half_line.contains(std::vector{20.25}));
  CHECK(BoxInvariant::unbounded(3).contains(std::vector{1e308, -1e308, 0.0}));
}

TEST_CASE("projection clamps exterior points onto the boundary") {
  const auto tcl_off = BoxInvariant::interval(-kInf, 20.25);
  CHECK(tcl_off.project(std::vector{20.5}) == std::vector{20.25});

  const BoxInvariant square({0.0, 0.0}, {1.0, 1.0});
  CHECK(square.project(std::vector{1.3, 0.5}) == std::vector{1.0, 0.5});
  CHECK(square.project(std::vector{-2.0, 7.0}) == std::vector{0.0, 1.0});
  // already on the boundary: not in the open box, so projection is defined
  CHECK(square.project(std::vector{1.0, 0.2}) == std::vector{1.0, 0.2});
}

TEST_CASE("projection of an interior point is an error") {
  const BoxInvariant square({0.0, 0.0}, {1.0, 1.0});
  CHECK_THROWS_AS(square.project(std::vector{0.5, 0.5}), std::invalid_argument);
  std::vector z{0.5, 0.5};
  CHECK_THROWS_AS(square.project_in_place(z), std::invalid_argument);
}

TEST_CASE("projection is idempotent under outward perturbation") {
  const BoxInvariant box({-1.0, 0.0, 2.0}, {1.0, 3.0, kInf});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> spread(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> z{spread(rng), spread(rng), spread(rng)};
    if (box.contains(z)) continue;
    const auto p = box.project(z);
    CHECK(box.contains_closure(p));
    CHECK_FALSE(box.contains(p));
    auto nudged = p;
    for (std::size_t i = 0; i < nudged.size(); ++i) {
      if (p[i] == box.lower()[i]) nudged[i] -= 1e-9;
      if (p[i] == box.upper()[i]) nudged[i] += 1e-9;
    }
    CHECK(box.project(nudged) == p);
    CHECK(box.project(p) == p);
  }
}
