#include "shs/model.hpp"

#include <cmath>
#include <stdexcept>

namespace shs {
namespace {

constexpr double kStochasticTol = 1e-12;

bool is_probability_vector(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= kStochasticTol;
}

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Interior reference point of a box: the initial state clamped into the
// box when available, otherwise a finite point built from the bounds.
std::vector<double> reference_point(const BoxInvariant& box, std::span<const double> hint) {
  std::vector<double> p(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double lo = box.lower()[i];
    const double hi = box.upper()[i];
    if (i < hint.size() && hint[i] > lo && hint[i] < hi) {
      p[i] = hint[i];
    } else if (std::isfinite(lo) && std::isfinite(hi)) {
      p[i] = 0.5 * (lo + hi);
    } else if (std::isfinite(lo)) {
      p[i] = lo + 1.0;
    } else if (std::isfinite(hi)) {
      p[i] = hi - 1.0;
    } else {
      p[i] = 0.0;
    }
  }
  return p;
}

// Points on the finite faces of the box, one per finite bound.
std::vector<std::vector<double>> boundary_points(const BoxInvariant& box,
                                                 std::span<const double> hint) {
  std::vector<std::vector<double>> pts;
  const auto ref = reference_point(box, hint);
  for (std::size_t i = 0; i < box.dim(); ++i) {
    for (double bound : {box.lower()[i], box.upper()[i]}) {
      if (!std::isfinite(bound)) continue;
      auto p = ref;
      p[i] = bound;
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

}  // namespace

ValidationResult validate_model(const ShsModel& model) {
  ValidationResult result;
  auto& v = result.violations;

  if (model.mode_count() == 0) {
    v.emplace_back("model has no modes");
    return result;
  }
  if (!model.drift || !model.diffusion || !model.kernel) {
    v.emplace_back("model is missing drift, diffusion or kernel");
    return result;
  }
  for (std::size_t q = 0; q < model.mode_count(); ++q) {
    if (model.invariants[q].dim() != model.dim()) {
      v.emplace_back("dimension mismatch: invariant of mode " + std::to_string(q));
    }
  }
  if (model.initial.continuous.size() != model.dim()) {
    v.emplace_back("dimension mismatch: initial state");
  }
  if (!v.empty()) return result;

  const auto& x0 = model.initial;
  if (x0.mode < 0 || static_cast<std::size_t>(x0.mode) >= model.mode_count()) {
    v.emplace_back("initial mode out of range");
    return result;
  }
  if (!model.invariants[x0.mode].contains(x0.continuous)) {
    v.emplace_back("initial state outside invariant");
  }

  std::vector<double> drift(model.dim());
  std::vector<double> diffusion(model.dim() * model.noise_dim);
  std::vector<double> probs(model.mode_count());

  bool kernel_bad = false;
  bool fields_bad = false;
  for (std::size_t q = 0; q < model.mode_count(); ++q) {
    const auto& inv = model.invariants[q];
    const int mode = static_cast<int>(q);
    auto interior = reference_point(inv, x0.continuous);
    auto faces = boundary_points(inv, x0.continuous);

    std::vector<std::vector<double>> closure_pts = faces;
    closure_pts.push_back(interior);
    for (const auto& p : closure_pts) {
      model.drift(mode, p, drift);
      model.diffusion(mode, p, diffusion);
      if (!all_finite(drift) || !all_finite(diffusion)) fields_bad = true;
    }
    for (const auto& p : faces) {
      std::fill(probs.begin(), probs.end(), 0.0);
      model.kernel(mode, p, probs);
      if (!is_probability_vector(probs)) kernel_bad = true;
    }
  }
  if (kernel_bad) v.emplace_back("kernel not stochastic");
  if (fields_bad) v.emplace_back("drift or diffusion not finite on invariant closure");
  return result;
}

int sample_kernel(const ShsModel& model, int mode, std::span<const double> z, double u) {
  std::vector<double> probs(model.mode_count(), 0.0);
  model.kernel(mode, z, probs);
  if (!is_probability_vector(probs)) {
    throw std::invalid_argument("sample_kernel: kernel row is not a probability vector");
  }
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] > 0.0) last_positive = static_cast<int>(j);
    cumulative += probs[j];
    if (u < cumulative) return static_cast<int>(j);
  }
  return last_positive;
}

}  // namespace shs
