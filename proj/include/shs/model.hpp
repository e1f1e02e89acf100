#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shs/box_invariant.hpp"

namespace shs {

struct HybridState {
  int mode = 0;
  std::vector<double> continuous;
};

/// How a step that leaves the current invariant picks the next hybrid state.
enum class ModeUpdate {
  /// Project onto the invariant boundary, then draw the new mode from the
  /// boundary kernel evaluated at the projected point.
  kBoundaryProjection,
  /// Keep the post-step state as is and let the kernel, evaluated at that
  /// state, act as a controller sampled only at grid times. The kernel must
  /// place the state in the closure of the new mode's invariant.
  kDigitalController,
};

/// drift(q, z, out): out has size dim().
using DriftFn = std::function<void(int, std::span<const double>, std::span<double>)>;
/// diffusion(q, z, out): out is row-major dim() x noise_dim().
using DiffusionFn = std::function<void(int, std::span<const double>, std::span<double>)>;
/// kernel(q, z, out): out has size mode_count() and is a probability vector.
using KernelFn = std::function<void(int, std::span<const double>, std::span<double>)>;

/// Finite-mode stochastic hybrid system with box invariants and forced
/// transitions on the invariant boundary. Immutable after construction.
struct ShsModel {
  std::string name;
  std::vector<BoxInvariant> invariants;  // one per mode
  std::size_t state_dim = 0;
  std::size_t noise_dim = 0;
  DriftFn drift;
  DiffusionFn diffusion;
  KernelFn kernel;
  HybridState initial;
  ModeUpdate mode_update = ModeUpdate::kBoundaryProjection;

  std::size_t mode_count() const { return invariants.size(); }
  std::size_t dim() const { return state_dim; }
};

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Collects structural violations; never throws.
ValidationResult validate_model(const ShsModel& model);

/// Inverse-CDF draw from the kernel row at (q, z) using the variate u in [0, 1).
/// Throws std::invalid_argument when the row is not a probability vector.
int sample_kernel(const ShsModel& model, int mode, std::span<const double> z, double u);

}  // namespace shs
