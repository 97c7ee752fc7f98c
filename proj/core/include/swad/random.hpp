#pragma once

#include <cstdint>
#include <random>

namespace swad {

// splitmix64 finalizer; used to derive independent substreams from (seed, key).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (key + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seeded generator with distribution code written out explicitly, so that
/// streams are identical across standard library implementations.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the standard).
/// Uniform reals take the top 53 bits; integers use rejection on a
/// power-of-two mask; normals use the basic Box-Muller transform and cache
/// the second variate.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed, 0)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace swad
