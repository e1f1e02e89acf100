#include "shs/noise.hpp"

#include <cmath>
#include <numbers>

namespace shs {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr std::uint32_t kTagNormal = 0;
constexpr std::uint32_t kTagUniform = 1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::array<std::uint32_t, 4> counter_for(std::uint64_t block, std::uint64_t replication) {
  return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
          static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(replication >> 32)};
}

// (0, 1]: never zero so the logarithm stays finite.
double open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

// [0, 1)
double half_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

// Box-Muller on one Philox block: two independent standard normals.
std::array<double, 2> normal_pair(const std::array<std::uint32_t, 4>& r) {
  const double radius = std::sqrt(-2.0 * std::log(open_unit(r[0], r[1])));
  const double angle = 2.0 * std::numbers::pi * half_open_unit(r[2], r[3]);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint32_t stream)
    : seed_(seed), stream_(stream) {}

std::array<std::uint32_t, 2> NoiseStream::key_for(int level, std::uint32_t tag) const {
  const std::uint64_t address = (static_cast<std::uint64_t>(stream_) << 32) |
                                (static_cast<std::uint64_t>(static_cast<std::uint32_t>(level)) << 8) |
                                tag;
  const std::uint64_t key = splitmix64(splitmix64(seed_) ^ address);
  return {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
}

void NoiseStream::normals(int level, std::uint64_t replication, std::uint64_t step,
                          std::span<double> out) const {
  const auto key = key_for(level, kTagNormal);
  const std::uint64_t m = out.size();
  std::uint64_t cached_block = ~0ull;
  std::array<double, 2> pair{};
  for (std::uint64_t j = 0; j < m; ++j) {
    const std::uint64_t element = step * m + j;
    const std::uint64_t block = element / 2;
    if (block != cached_block) {
      pair = normal_pair(philox4x32(counter_for(block, replication), key));
      cached_block = block;
    }
    out[j] = pair[element % 2];
  }
}

void NoiseStream::path_normals(int level, std::uint64_t replication, std::size_t steps,
                               std::size_t m, std::span<double> out) const {
  const auto key = key_for(level, kTagNormal);
  const std::uint64_t total = static_cast<std::uint64_t>(steps) * m;
  std::uint64_t element = 0;
  for (std::uint64_t block = 0; element < total; ++block) {
    const auto pair = normal_pair(philox4x32(counter_for(block, replication), key));
    out[element++] = pair[0];
    if (element < total) out[element++] = pair[1];
  }
}

double NoiseStream::uniform(int level, std::uint64_t replication, std::uint64_t step) const {
  const auto r = philox4x32(counter_for(step, replication), key_for(level, kTagUniform));
  return half_open_unit(r[0], r[1]);
}

}  // namespace shs
