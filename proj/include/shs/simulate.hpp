#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "shs/model.hpp"
#include "shs/noise.hpp"

namespace shs {

/// Time grid of one discretization level: n = kappa * 2^level steps over
/// [0, horizon].
class LevelParams {
 public:
  LevelParams(int kappa, int level, double horizon);

  int kappa() const { return kappa_; }
  int level() const { return level_; }
  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  double dt() const { return horizon_ / static_cast<double>(steps_); }

 private:
  int kappa_;
  int level_;
  double horizon_;
  std::size_t steps_;
};

/// Grid values of an approximate execution; index 0 is the initial state.
class DiscretePath {
 public:
  DiscretePath(LevelParams params, std::size_t dim);

  const LevelParams& params() const { return params_; }
  std::size_t dim() const { return dim_; }
  /// Number of grid points, steps() + 1.
  std::size_t size() const { return modes_.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * params_.dt(); }
  int mode(std::size_t k) const { return modes_[k]; }
  std::span<const double> state(std::size_t k) const {
    return {states_.data() + k * dim_, dim_};
  }
  HybridState hybrid_state(std::size_t k) const;
  /// Step indices k at which mode(k) differs from mode(k - 1).
  const std::vector<std::size_t>& switch_steps() const { return switches_; }

 private:
  friend class PathSampler;
  void reset(const LevelParams& params, const HybridState& initial);

  LevelParams params_;
  std::size_t dim_;
  std::vector<double> states_;
  std::vector<int> modes_;
  std::vector<std::size_t> switches_;
};

struct CoupledPaths {
  DiscretePath fine;    // level l, kappa * 2^l steps
  DiscretePath coarse;  // level l - 1, kappa * 2^(l-1) steps
};

/// Kernel variate for grid step k of a path; called only when a step leaves
/// the invariant.
using UniformAt = std::function<double(std::size_t)>;

/// One Euler-Maruyama step z + b dt + sigma sqrt(dt) W followed by the
/// model's mode-update rule. `u` feeds the kernel draw if one is needed.
HybridState euler_update(const ShsModel& model, const HybridState& state, double dt,
                         std::span<const double> w, double u = 0.0);

/// Coarse-step increments (W_2k + W_2k+1) / sqrt(2) from fine increments
/// laid out step-major with `noise_dim` entries per step.
std::vector<double> coarse_increments(std::span<const double> fine, std::size_t noise_dim);

/// Reusable sampling workspace. Not thread-safe; use one per worker.
class PathSampler {
 public:
  PathSampler(const ShsModel& model, const NoiseStream& noise);

  /// Path at `params` driven by the noise at (level, replication, k).
  const DiscretePath& sample(const LevelParams& params, std::uint64_t replication);

  /// Fine/coarse pair at level >= 1 sharing the fine increments. Kernel
  /// variates of coarse step k reuse those of fine step 2k.
  const CoupledPaths& sample_coupled(int level, int kappa, double horizon,
                                     std::uint64_t replication);

  /// Path driven by explicit increments (steps() * noise_dim entries).
  const DiscretePath& sample_driven(const LevelParams& params,
                                    std::span<const double> increments,
                                    const UniformAt& uniform_at);

  /// Euler updates executed since construction.
  std::uint64_t steps_taken() const { return steps_taken_; }

 private:
  void run(DiscretePath& path, const LevelParams& params, std::span<const double> increments,
           const UniformAt& uniform_at);

  const ShsModel& model_;
  const NoiseStream& noise_;
  std::vector<double> fine_noise_;
  std::vector<double> coarse_noise_;
  std::vector<double> drift_;
  std::vector<double> diffusion_;
  std::vector<double> z_aux_;
  DiscretePath single_;
  CoupledPaths coupled_;
  std::uint64_t steps_taken_ = 0;
};

/// Single-level path at addresses (level, replication, k), k < n.
DiscretePath sample_path(const ShsModel& model, const LevelParams& params,
                         const NoiseStream& noise, std::uint64_t replication);

/// Throws std::invalid_argument for level 0.
CoupledPaths sample_coupled(const ShsModel& model, int level, int kappa, double horizon,
                            const NoiseStream& noise, std::uint64_t replication);

/// Path driven by explicit increments; used to replay a coarse path.
DiscretePath sample_path_driven(const ShsModel& model, const LevelParams& params,
                                std::span<const double> increments, const UniformAt& uniform_at);

}  // namespace shs
