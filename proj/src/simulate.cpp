#include "shs/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace shs {
namespace {

struct StepScratch {
  std::span<double> drift;
  std::span<double> diffusion;
  std::span<double> z_aux;
};

// Advances (mode, z) by one step in place. Returns true on a mode switch.
bool advance(const ShsModel& model, int& mode, std::span<double> z, double dt, double sqrt_dt,
             std::span<const double> w, const StepScratch& s, const UniformAt& uniform_at,
             std::size_t step) {
  const std::size_t n = model.dim();
  const std::size_t m = model.noise_dim;
  model.drift(mode, z, s.drift);
  model.diffusion(mode, z, s.diffusion);
  for (std::size_t i = 0; i < n; ++i) {
    double noise = 0.0;
    for (std::size_t j = 0; j < m; ++j) noise += s.diffusion[i * m + j] * w[j];
    s.z_aux[i] = z[i] + s.drift[i] * dt + sqrt_dt * noise;
  }
  const auto& inv = model.invariants[mode];
  if (inv.contains(s.z_aux)) {
    std::copy(s.z_aux.begin(), s.z_aux.end(), z.begin());
    return false;
  }
  if (model.mode_update == ModeUpdate::kBoundaryProjection) {
    inv.project_in_place(s.z_aux);
  }
  std::copy(s.z_aux.begin(), s.z_aux.end(), z.begin());
  const int next = sample_kernel(model, mode, z, uniform_at(step));
  const bool switched = next != mode;
  mode = next;
  return switched;
}

}  // namespace

LevelParams::LevelParams(int kappa, int level, double horizon)
    : kappa_(kappa), level_(level), horizon_(horizon) {
  if (kappa < 1) throw std::invalid_argument("LevelParams: kappa must be >= 1");
  if (level < 0 || level > 40) throw std::invalid_argument("LevelParams: level out of range");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("LevelParams: horizon must be positive and finite");
  }
  steps_ = static_cast<std::size_t>(kappa) << level;
}

DiscretePath::DiscretePath(LevelParams params, std::size_t dim)
    : params_(params), dim_(dim) {}

HybridState DiscretePath::hybrid_state(std::size_t k) const {
  auto z = state(k);
  return HybridState{modes_[k], std::vector<double>(z.begin(), z.end())};
}

void DiscretePath::reset(const LevelParams& params, const HybridState& initial) {
  params_ = params;
  dim_ = initial.continuous.size();
  const std::size_t points = params.steps() + 1;
  states_.resize(points * dim_);
  modes_.resize(points);
  switches_.clear();
  std::copy(initial.continuous.begin(), initial.continuous.end(), states_.begin());
  modes_[0] = initial.mode;
}

HybridState euler_update(const ShsModel& model, const HybridState& state, double dt,
                         std::span<const double> w, double u) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_update: dt must be positive");
  if (w.size() != model.noise_dim || state.continuous.size() != model.dim()) {
    throw std::invalid_argument("euler_update: dimension mismatch");
  }
  std::vector<double> drift(model.dim()), diffusion(model.dim() * model.noise_dim),
      z_aux(model.dim());
  HybridState next = state;
  advance(model, next.mode, next.continuous, dt, std::sqrt(dt), w, {drift, diffusion, z_aux},
          [u](std::size_t) { return u; }, 0);
  return next;
}

namespace {

void fill_coarse(std::span<const double> fine, std::size_t noise_dim, std::vector<double>& coarse) {
  if (noise_dim == 0 || fine.size() % (2 * noise_dim) != 0) {
    throw std::invalid_argument("coarse_increments: need an even number of fine steps");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  coarse.resize(fine.size() / 2);
  const std::size_t coarse_steps = coarse.size() / noise_dim;
  for (std::size_t k = 0; k < coarse_steps; ++k) {
    for (std::size_t j = 0; j < noise_dim; ++j) {
      coarse[k * noise_dim + j] =
          (fine[2 * k * noise_dim + j] + fine[(2 * k + 1) * noise_dim + j]) * inv_sqrt2;
    }
  }
}

}  // namespace

std::vector<double> coarse_increments(std::span<const double> fine, std::size_t noise_dim) {
  std::vector<double> coarse;
  fill_coarse(fine, noise_dim, coarse);
  return coarse;
}

PathSampler::PathSampler(const ShsModel& model, const NoiseStream& noise)
    : model_(model),
      noise_(noise),
      drift_(model.dim()),
      diffusion_(model.dim() * model.noise_dim),
      z_aux_(model.dim()),
      single_(LevelParams(1, 0, 1.0), model.dim()),
      coupled_{DiscretePath(LevelParams(1, 0, 1.0), model.dim()),
               DiscretePath(LevelParams(1, 0, 1.0), model.dim())} {}

void PathSampler::run(DiscretePath& path, const LevelParams& params,
                      std::span<const double> increments, const UniformAt& uniform_at) {
  const std::size_t n = params.steps();
  const std::size_t m = model_.noise_dim;
  const std::size_t dim = model_.dim();
  if (increments.size() != n * m) {
    throw std::invalid_argument("PathSampler: increment count does not match the grid");
  }
  path.reset(params, model_.initial);
  const double dt = params.dt();
  const double sqrt_dt = std::sqrt(dt);
  const StepScratch scratch{drift_, diffusion_, z_aux_};
  int mode = model_.initial.mode;
  double* states = path.states_.data();
  for (std::size_t k = 0; k < n; ++k) {
    std::copy(states + k * dim, states + (k + 1) * dim, states + (k + 1) * dim);
    std::span<double> z(states + (k + 1) * dim, dim);
    if (advance(model_, mode, z, dt, sqrt_dt, increments.subspan(k * m, m), scratch, uniform_at,
                k)) {
      path.switches_.push_back(k + 1);
    }
    path.modes_[k + 1] = mode;
  }
  steps_taken_ += n;
}

const DiscretePath& PathSampler::sample(const LevelParams& params, std::uint64_t replication) {
  const std::size_t m = model_.noise_dim;
  fine_noise_.resize(params.steps() * m);
  noise_.path_normals(params.level(), replication, params.steps(), m, fine_noise_);
  const int level = params.level();
  run(single_, params, fine_noise_, [this, level, replication](std::size_t k) {
    return noise_.uniform(level, replication, k);
  });
  return single_;
}

const CoupledPaths& PathSampler::sample_coupled(int level, int kappa, double horizon,
                                                std::uint64_t replication) {
  if (level < 1) throw std::invalid_argument("sample_coupled: level must be >= 1");
  const LevelParams fine(kappa, level, horizon);
  const LevelParams coarse(kappa, level - 1, horizon);
  const std::size_t m = model_.noise_dim;
  fine_noise_.resize(fine.steps() * m);
  noise_.path_normals(level, replication, fine.steps(), m, fine_noise_);
  run(coupled_.fine, fine, fine_noise_, [this, level, replication](std::size_t k) {
    return noise_.uniform(level, replication, k);
  });
  fill_coarse(fine_noise_, m, coarse_noise_);
  run(coupled_.coarse, coarse, coarse_noise_, [this, level, replication](std::size_t k) {
    return noise_.uniform(level, replication, 2 * k);
  });
  return coupled_;
}

const DiscretePath& PathSampler::sample_driven(const LevelParams& params,
                                               std::span<const double> increments,
                                               const UniformAt& uniform_at) {
  run(single_, params, increments, uniform_at);
  return single_;
}

DiscretePath sample_path(const ShsModel& model, const LevelParams& params,
                         const NoiseStream& noise, std::uint64_t replication) {
  PathSampler sampler(model, noise);
  return sampler.sample(params, replication);
}

CoupledPaths sample_coupled(const ShsModel& model, int level, int kappa, double horizon,
                            const NoiseStream& noise, std::uint64_t replication) {
  PathSampler sampler(model, noise);
  return sampler.sample_coupled(level, kappa, horizon, replication);
}

DiscretePath sample_path_driven(const ShsModel& model, const LevelParams& params,
                                std::span<const double> increments, const UniformAt& uniform_at) {
  const NoiseStream unused(0);
  PathSampler sampler(model, unused);
  return sampler.sample_driven(params, increments, uniform_at);
}

}  // namespace shs
