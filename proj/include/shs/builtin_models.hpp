#pragma once

#include <string>
#include <vector>

#include "shs/box_invariant.hpp"
#include "shs/model.hpp"

namespace shs {

/// Cooling thermostatically controlled load. Temperatures in degrees C,
/// time in hours. Defaults are a residential air conditioner.
struct TclParams {
  double set_point = 20.0;     // theta_s
  double dead_band = 0.5;      // delta_d
  double ambient = 32.0;       // theta_a
  double power = 14.0;         // P_rate [kW]
  double resistance = 1.5;     // R [C/kW]
  double capacitance = 10.0;   // C [kWh/C]
  double sigma_off = 0.2;      // [C/sqrt(hour)]
  double sigma_on = 0.22;
  int initial_mode = 0;        // OFF
  double initial_temperature = 20.0;

  double lower_switch() const { return set_point - 0.5 * dead_band; }  // theta_-
  double upper_switch() const { return set_point + 0.5 * dead_band; }  // theta_+

  /// Empty when valid. Noise levels may be zero (deterministic variant).
  std::vector<std::string> violations() const;
};

/// Thermostat switching law: OFF at or below theta_-, ON at or above theta_+,
/// otherwise hold the current mode.
int tcl_switch(const TclParams& p, int mode, double temperature);

/// Two-mode model: mode 0 (OFF) lives on (-inf, theta_+), mode 1 (ON) on
/// (theta_-, +inf), drift (theta_a - q R P - theta) / (C R), constant noise
/// per mode, Kronecker kernel at tcl_switch. Throws std::invalid_argument on
/// invalid parameters.
ShsModel tcl_model(const TclParams& p,
                   ModeUpdate semantics = ModeUpdate::kDigitalController);

/// One-mode model dz = mu dt + sigma dW started at 0, invariant (-inf, barrier).
/// Requires sigma > 0. The barrier only bounds the invariant; use +inf for
/// free motion.
ShsModel brownian_barrier_model(double mu, double sigma, double barrier = kInf);

/// P(max_{t <= s} (mu t + sigma W_t) <= a) by the reflection principle.
double brownian_max_cdf(double mu, double sigma, double horizon, double a);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace shs
