#ifndef ALMM_RNG_HPP_
#define ALMM_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace almm {

/// Seeded generator with uniform/normal draws built directly on the
/// mt19937_64 bit stream, so a given seed reproduces the same sequence
/// everywhere (std::*_distribution output is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two uniforms per draw.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) {
    return mean + stddev * normal();
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace almm

#endif  // ALMM_RNG_HPP_
