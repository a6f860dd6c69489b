#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace blmcli {

/// Seeded standard-normal stream: mt19937_64 driving an explicit Box-Muller
/// transform, so draws depend only on this code and the seed, not on the
/// standard library's distribution internals.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  static constexpr const char* algorithm() { return "mt19937_64+box-muller"; }

  double operator()() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;  // [0, 1), 53 bits
  }
  std::mt19937_64 rng_;
};

}  // namespace blmcli
