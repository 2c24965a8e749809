// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sefdm/types.hpp"

namespace sefdm {

// Deterministic random stream. Uniform doubles and Gaussian samples are
// derived explicitly from the raw mt19937_64 output so that sequences are
// identical on every platform; std distributions are avoided on purpose.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in (0, 1]
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via the polar Box-Muller form (cosine branch)
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // circularly symmetric complex Gaussian with E|z|^2 = sigma2
  cplx complex_normal(double sigma2) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-sigma2 * std::log(u1));
    const double phi = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  // fills with 0/1 values, 64 bits per engine word
  void fill_bits(std::vector<std::uint8_t>& bits) {
    std::size_t i = 0;
    while (i < bits.size()) {
      std::uint64_t w = eng_();
      for (int b = 0; b < 64 && i < bits.size(); ++b, ++i) {
        bits[i] = static_cast<std::uint8_t>((w >> b) & 1u);
      }
    }
  }

 private:
  std::mt19937_64 eng_;
};

// splitmix64 finalizer
std::uint64_t splitmix64(std::uint64_t z);

// Order-sensitive seed combiner used for the master -> point -> frame
// hierarchy. Derived seeds depend only on the values combined, never on
// enumeration order, so extending a sweep does not perturb existing points.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace sefdm
