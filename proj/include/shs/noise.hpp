#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace shs {

/// Philox4x32-10 counter-based bijection (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Address-indexed Gaussian noise. The value at (level, replication, step)
/// is a pure function of the seed and the address, so paths can be drawn in
/// any order or on any number of threads and still agree bit for bit.
class NoiseStream {
 public:
  /// `stream` separates independent families (e.g. a pilot run and the main
  /// run) drawn from the same master seed.
  explicit NoiseStream(std::uint64_t seed, std::uint32_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint32_t stream() const { return stream_; }

  /// The m-dimensional standard normal vector at one address.
  void normals(int level, std::uint64_t replication, std::uint64_t step,
               std::span<double> out) const;

  /// Normals for steps 0..steps-1 of one path, step-major, out.size() == steps * m.
  /// Identical to calling normals() per step.
  void path_normals(int level, std::uint64_t replication, std::size_t steps, std::size_t m,
                    std::span<double> out) const;

  /// Uniform variate in [0, 1) at one address, independent of the normals.
  double uniform(int level, std::uint64_t replication, std::uint64_t step) const;

 private:
  std::array<std::uint32_t, 2> key_for(int level, std::uint32_t tag) const;

  std::uint64_t seed_;
  std::uint32_t stream_;
};

}  // namespace shs
