#pragma once

#include "shs/builtin_models.hpp"
#include "shs/model.hpp"

namespace testing {

// dz = -rate z dt + sigma dW on the whole line, one mode.
inline shs::ShsModel linear_model(double rate, double sigma, double z0) {
  shs::ShsModel m;
  m.name = "linear";
  m.state_dim = 1;
  m.noise_dim = 1;
  m.invariants = {shs::BoxInvariant::unbounded(1)};
  m.drift = [rate](int, std::span<const double> z, std::span<double> out) {
    out[0] = -rate * z[0];
  };
  m.diffusion = [sigma](int, std::span<const double>, std::span<double> out) {
    out[0] = sigma;
  };
  m.kernel = [](int, std::span<const double>, std::span<double> out) { out[0] = 1.0; };
  m.initial = shs::HybridState{0, {z0}};
  return m;
}

// dz = speed dt, one mode.
inline shs::ShsModel ramp_model(double speed) {
  shs::ShsModel m = linear_model(0.0, 0.0, 0.0);
  m.name = "ramp";
  m.drift = [speed](int, std::span<const double>, std::span<double> out) { out[0] = speed; };
  return m;
}

inline shs::TclParams quiet_tcl() {
  shs::TclParams p;
  p.sigma_off = 0.0;
  p.sigma_on = 0.0;
  return p;
}

}  // namespace testing
