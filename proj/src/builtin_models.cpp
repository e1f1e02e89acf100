#include "shs/builtin_models.hpp"

#include <cmath>
#include <stdexcept>

namespace shs {

std::vector<std::string> TclParams::violations() const {
  std::vector<std::string> v;
  auto positive = [&](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) v.emplace_back(std::string(name) + " must be > 0");
  };
  positive(set_point, "set_point");
  positive(dead_band, "dead_band");
  positive(ambient, "ambient");
  positive(power, "power");
  positive(resistance, "resistance");
  positive(capacitance, "capacitance");
  if (!(sigma_off >= 0.0) || !std::isfinite(sigma_off)) v.emplace_back("sigma_off must be >= 0");
  if (!(sigma_on >= 0.0) || !std::isfinite(sigma_on)) v.emplace_back("sigma_on must be >= 0");
  if (initial_mode != 0 && initial_mode != 1) v.emplace_back("initial_mode must be 0 or 1");
  if (!std::isfinite(initial_temperature)) v.emplace_back("initial_temperature must be finite");
  return v;
}

int tcl_switch(const TclParams& p, int mode, double temperature) {
  if (temperature <= p.lower_switch()) return 0;
  if (temperature >= p.upper_switch()) return 1;
  return mode;
}

ShsModel tcl_model(const TclParams& p, ModeUpdate semantics) {
  if (auto v = p.violations(); !v.empty()) {
    throw std::invalid_argument("tcl_model: " + v.front());
  }
  ShsModel m;
  m.name = "tcl";
  m.state_dim = 1;
  m.noise_dim = 1;
  m.invariants = {BoxInvariant::interval(-kInf, p.upper_switch()),
                  BoxInvariant::interval(p.lower_switch(), kInf)};
  const double cr = p.capacitance * p.resistance;
  const double rp = p.resistance * p.power;
  const double ambient = p.ambient;
  m.drift = [=](int q, std::span<const double> z, std::span<double> out) {
    out[0] = (ambient - q * rp - z[0]) / cr;
  };
  m.diffusion = [s0 = p.sigma_off, s1 = p.sigma_on](int q, std::span<const double>, std::span<double> out) {
    out[0] = q == 0 ? s0 : s1;
  };
  m.kernel = [p](int q, std::span<const double> z, std::span<double> out) {
    out[0] = 0.0;
    out[1] = 0.0;
    out[tcl_switch(p, q, z[0])] = 1.0;
  };
  m.initial = HybridState{p.initial_mode, {p.initial_temperature}};
  m.mode_update = semantics;
  return m;
}

ShsModel brownian_barrier_model(double mu, double sigma, double barrier) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw std::invalid_argument("brownian_barrier_model: need finite mu and sigma > 0");
  }
  if (!(barrier > 0.0)) {
    throw std::invalid_argument("brownian_barrier_model: barrier must exceed the start point 0");
  }
  ShsModel m;
  m.name = "brownian";
  m.state_dim = 1;
  m.noise_dim = 1;
  m.invariants = {BoxInvariant::interval(-kInf, barrier)};
  m.drift = [mu](int, std::span<const double>, std::span<double> out) { out[0] = mu; };
  m.diffusion = [sigma](int, std::span<const double>, std::span<double> out) { out[0] = sigma; };
  m.kernel = [](int, std::span<const double>, std::span<double> out) { out[0] = 1.0; };
  m.initial = HybridState{0, {0.0}};
  m.mode_update = ModeUpdate::kBoundaryProjection;
  return m;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double brownian_max_cdf(double mu, double sigma, double horizon, double a) {
  if (a <= 0.0) return 0.0;
  if (std::isinf(a)) return 1.0;
  const double scale = sigma * std::sqrt(horizon);
  const double reflected = std::exp(2.0 * mu * a / (sigma * sigma));
  return normal_cdf((a - mu * horizon) / scale) -
         reflected * normal_cdf((-a - mu * horizon) / scale);
}

}  // namespace shs
