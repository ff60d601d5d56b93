#pragma once

#include <cstdint>
#include <random>

namespace hmot {

/// Seeded 64-bit Mersenne Twister with distribution code written out here, so
/// a seed produces the same stream with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Standard normal (Box-Muller, one value per call).
  double Normal();
  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Seed for item `index` of a batch, so per-item results do not depend on
/// processing order.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

}  // namespace hmot
