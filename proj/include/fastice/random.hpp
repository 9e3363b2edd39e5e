#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fastice/tensor.hpp"

namespace fastice {

// Seeded RNG with explicit bit-to-double mapping. std::mt19937_64 has a
// portable stream, but the standard distributions do not; mapping the raw
// draws ourselves keeps sampled reports reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double range(double a, double b) { return a + (b - a) * unit(); }

  // Log-uniform magnitude: 10^U(lo, hi).
  double log_range(double lo_exp, double hi_exp) {
    return std::pow(10.0, range(lo_exp, hi_exp));
  }

  double sign() { return unit() < 0.5 ? -1.0 : 1.0; }

  Vec2 unit_vec() {
    const double phi = range(0.0, 2.0 * M_PI);
    return {std::cos(phi), std::sin(phi)};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fastice
