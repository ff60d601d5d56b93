#include "hmot/random.h"

#include <cmath>
#include <numbers>

namespace hmot {

double Rng::Normal() {
  double u1 = Uniform();
  while (u1 == 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index) {
  return seed + index;
}

}  // namespace hmot
