#pragma once

#include <functional>

namespace shs {

/// Cubic step: 1 below -1, 0 above 1, 1/2 + (5x^3 - 9x)/8 in between.
double smooth_step(double x);

/// Smoothed indicator of (-inf, threshold] with half-width delta = 2^-index.
class Smoother {
 public:
  static constexpr int kDegree = 3;
  /// 2^(degree + 1); the smoothing error shrinks by this factor per index.
  static constexpr double kRatio = 16.0;

  Smoother(int index, double threshold);

  int index() const { return index_; }
  double delta() const { return delta_; }
  double threshold() const { return threshold_; }

  /// g((y - threshold) / delta). The never-exits sentinel maps to 0.
  double operator()(double y) const;

 private:
  int index_;
  double delta_;
  double threshold_;
};

double smooth_eval(const Smoother& smoother, double y);

/// 1 if y <= threshold else 0; the never-exits sentinel maps to 0.
double indicator_eval(double threshold, double y);

/// Scalar map applied to functional values.
using Payoff = std::function<double(double)>;

Payoff indicator_payoff(double threshold);
Payoff smoothed_payoff(int index, double threshold);

}  // namespace shs
