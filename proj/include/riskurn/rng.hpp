#pragma once

#include <cstdint>
#include <random>

namespace riskurn {

// SplitMix64 finalizer. Full 64-bit avalanche; used to derive independent
// seed streams from one master seed.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed-stream domains. Keeping the domains disjoint means a defendant
// stream can never collide with a bootstrap or repetition stream derived
// from the same master seed.
namespace seed_domain {
inline constexpr std::uint64_t defendant = 0;
inline constexpr std::uint64_t repetition = 1;
inline constexpr std::uint64_t bootstrap = 2;
}  // namespace seed_domain

// Seed for stream `index` within `domain`, derived from `master`. Streams
// depend only on (master, domain, index), never on evaluation order, which
// is what makes parallel runs reproducible at any thread count.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t domain,
                                    std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(domain * 0xD1B54A32D192ED03ULL + index));
}

// 53-bit uniform draw in [0, 1). Built from the raw generator word so the
// value stream is identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n) via fixed-point multiply; n must be > 0.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace riskurn
