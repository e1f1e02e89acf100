#include "shs/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace shs {

double smooth_step(double x) {
  if (x > 1.0) return 0.0;
  if (x < -1.0) return 1.0;
  return 0.5 + (5.0 * x * x * x - 9.0 * x) / 8.0;
}

Smoother::Smoother(int index, double threshold)
    : index_(index), delta_(std::ldexp(1.0, -index)), threshold_(threshold) {
  if (index < 1) throw std::invalid_argument("Smoother: index must be >= 1");
  if (!std::isfinite(threshold)) throw std::invalid_argument("Smoother: threshold must be finite");
}

double Smoother::operator()(double y) const {
  if (std::isinf(y)) return y > 0.0 ? 0.0 : 1.0;
  return smooth_step((y - threshold_) / delta_);
}

double smooth_eval(const Smoother& smoother, double y) { return smoother(y); }

double indicator_eval(double threshold, double y) { return y <= threshold ? 1.0 : 0.0; }

Payoff indicator_payoff(double threshold) {
  return [threshold](double y) { return indicator_eval(threshold, y); };
}

Payoff smoothed_payoff(int index, double threshold) {
  return [s = Smoother(index, threshold)](double y) { return s(y); };
}

}  // namespace shs
