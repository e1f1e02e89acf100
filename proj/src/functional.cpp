#include "shs/functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shs {
namespace {

// Relative slack so that k * dt == horizon is not lost to rounding.
constexpr double kGridSlack = 1e-12;

// Index of the last grid point with time <= horizon.
std::size_t last_index(const DiscretePath& path, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("functional horizon must be positive");
  const double grid_horizon = path.params().horizon();
  if (horizon > grid_horizon * (1.0 + kGridSlack)) {
    throw std::invalid_argument("path is shorter than the functional horizon");
  }
  const double exact = horizon / path.params().dt();
  auto k = static_cast<std::size_t>(std::floor(exact * (1.0 + kGridSlack)));
  return std::min(k, path.size() - 1);
}

void check_coordinate(std::size_t c, const DiscretePath& path) {
  if (c >= path.dim()) throw std::invalid_argument("functional coordinate out of range");
}

}  // namespace

double functional_horizon(const PathFunctional& f) {
  return std::visit([](const auto& v) { return v.horizon; }, f);
}

PathFunctional with_horizon(PathFunctional f, double horizon) {
  std::visit([horizon](auto& v) { v.horizon = horizon; }, f);
  return f;
}

std::string functional_name(const PathFunctional& f) {
  struct Namer {
    std::string operator()(const FirstExitTime&) const { return "first_exit_time"; }
    std::string operator()(const RunningMax&) const { return "running_max"; }
    std::string operator()(const TerminalValue&) const { return "terminal_value"; }
  };
  return std::visit(Namer{}, f);
}

double evaluate_functional(const PathFunctional& f, const DiscretePath& path) {
  struct Evaluator {
    const DiscretePath& path;

    double operator()(const FirstExitTime& fe) const {
      const std::size_t last = last_index(path, fe.horizon);
      for (std::size_t k = 0; k <= last; ++k) {
        const auto q = static_cast<std::size_t>(path.mode(k));
        if (q >= fe.safe_set.size()) throw std::invalid_argument("safe set has no box for mode");
        if (!fe.safe_set[q].contains_closure(path.state(k))) return path.time(k);
      }
      return kNeverExits;
    }

    double operator()(const RunningMax& rm) const {
      check_coordinate(rm.coordinate, path);
      const std::size_t last = last_index(path, rm.horizon);
      double best = path.state(0)[rm.coordinate];
      for (std::size_t k = 1; k <= last; ++k) best = std::max(best, path.state(k)[rm.coordinate]);
      return best;
    }

    double operator()(const TerminalValue& tv) const {
      check_coordinate(tv.coordinate, path);
      return path.state(last_index(path, tv.horizon))[tv.coordinate];
    }
  };
  return std::visit(Evaluator{path}, f);
}

}  // namespace shs
