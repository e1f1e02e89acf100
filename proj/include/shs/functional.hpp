#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "shs/box_invariant.hpp"
#include "shs/simulate.hpp"

namespace shs {

/// Value of FirstExitTime when the path never leaves the safe set. Compares
/// greater than every finite horizon and threshold.
inline constexpr double kNeverExits = kInf;

/// Earliest grid time at which (q_k, z_k) is outside the closed safe box of
/// mode q_k, searched over grid points in [0, horizon].
struct FirstExitTime {
  std::vector<BoxInvariant> safe_set;  // one box per mode, tested as a closed set
  double horizon = 1.0;
};

/// Maximum of one coordinate over grid points in [0, horizon].
struct RunningMax {
  std::size_t coordinate = 0;
  double horizon = 1.0;
};

/// Coordinate value at the last grid point not after the horizon.
struct TerminalValue {
  std::size_t coordinate = 0;
  double horizon = 1.0;
};

using PathFunctional = std::variant<FirstExitTime, RunningMax, TerminalValue>;

double functional_horizon(const PathFunctional& f);
PathFunctional with_horizon(PathFunctional f, double horizon);
std::string functional_name(const PathFunctional& f);

/// Throws std::invalid_argument on a non-positive horizon, a path shorter
/// than the horizon, or an out-of-range coordinate / mode.
double evaluate_functional(const PathFunctional& f, const DiscretePath& path);

}  // namespace shs
