#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace shs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open axis-aligned box prod_i (lower_i, upper_i). Bounds may be infinite.
class BoxInvariant {
 public:
  BoxInvariant() = default;
  BoxInvariant(std::vector<double> lower, std::vector<double> upper);

  /// One-dimensional interval (lower, upper).
  static BoxInvariant interval(double lower, double upper);
  /// Whole space of the given dimension.
  static BoxInvariant unbounded(std::size_t dim);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  /// Strict membership in the open box.
  bool contains(std::span<const double> z) const;
  /// Membership in the closed box.
  bool contains_closure(std::span<const double> z) const;

  /// Componentwise clamp of an exterior point onto the box boundary.
  /// Throws std::invalid_argument when z lies in the open box.
  std::vector<double> project(std::span<const double> z) const;
  /// In-place variant used by the path sampler; same precondition.
  void project_in_place(std::span<double> z) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace shs
