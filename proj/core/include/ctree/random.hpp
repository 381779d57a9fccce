#pragma once

#include <cstdint>
#include <random>

namespace ctree {

/// splitmix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  return mix_seed(base ^ mix_seed(trial));
}

/// Platform-stable generator: std::mt19937_64 (its output sequence is fixed
/// by the standard) seeded with a single 64-bit value, with doubles formed
/// from the top 53 bits. std::uniform_real_distribution is avoided because
/// its algorithm differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ctree
