// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "sefdm/rng.hpp"

using namespace sefdm;

TEST_SUITE("rng") {

TEST_CASE("identical seeds give identical streams") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.uniform01() == b.uniform01());
    CHECK(a.complex_normal(2.0) == b.complex_normal(2.0));
  }
}

TEST_CASE("mix_seed is order sensitive and spreads inputs") {
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(mix_seed(0, 0) != mix_seed(0, 1));
  CHECK(mix_seed(0, 0) != mix_seed(1, 0));
}

TEST_CASE("uniform01 stays in (0, 1]") {
  Rng rng(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("gaussian moments") {
  Rng rng(10);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("complex_normal has the configured power") {
  Rng rng(11);
  const double sigma2 = 0.37;
  const int n = 100000;
  double p = 0.0;
  for (int i = 0; i < n; ++i) p += std::norm(rng.complex_normal(sigma2));
  CHECK(p / n == doctest::Approx(sigma2).epsilon(0.02));
}

TEST_CASE("fill_bits is balanced") {
  Rng rng(12);
  std::vector<std::uint8_t> bits(100000);
  rng.fill_bits(bits);
  std::size_t ones = 0;
  for (auto b : bits) {
    CHECK((b == 0 || b == 1));
    ones += b;
  }
  CHECK(std::abs(static_cast<double>(ones) / bits.size() - 0.5) < 0.01);
}

}  // TEST_SUITE
