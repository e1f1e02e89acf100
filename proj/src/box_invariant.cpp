#include "shs/box_invariant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace shs {

BoxInvariant::BoxInvariant(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("BoxInvariant: bound vectors differ in length");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || !(lower_[i] < upper_[i])) {
      throw std::invalid_argument("BoxInvariant: need lower < upper in dimension " +
                                  std::to_string(i));
    }
  }
}

BoxInvariant BoxInvariant::interval(double lower, double upper) {
  return BoxInvariant({lower}, {upper});
}

BoxInvariant BoxInvariant::unbounded(std::size_t dim) {
  return BoxInvariant(std::vector<double>(dim, -kInf), std::vector<double>(dim, kInf));
}

bool BoxInvariant::contains(std::span<const double> z) const {
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(z[i] > lower_[i] && z[i] < upper_[i])) return false;
  }
  return true;
}

bool BoxInvariant::contains_closure(std::span<const double> z) const {
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(z[i] >= lower_[i] && z[i] <= upper_[i])) return false;
  }
  return true;
}

std::vector<double> BoxInvariant::project(std::span<const double> z) const {
  std::vector<double> out(z.begin(), z.end());
  project_in_place(out);
  return out;
}

void BoxInvariant::project_in_place(std::span<double> z) const {
  if (z.size() != lower_.size()) {
    throw std::invalid_argument("BoxInvariant::project: dimension mismatch");
  }
  if (contains(z)) {
    throw std::invalid_argument("BoxInvariant::project: point is interior");
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = std::clamp(z[i], lower_[i], upper_[i]);
  }
}

}  // namespace shs
