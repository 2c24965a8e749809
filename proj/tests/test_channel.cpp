// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "sefdm/channel.hpp"
#include "sefdm/errors.hpp"

using namespace sefdm;

namespace {
constexpr double kC = 299792458.0;
}

TEST_SUITE("channel") {

TEST_CASE("single link at one wavelength range") {
  const double carrier = 2.4e9;
  const double lambda = kC / carrier;
  Geometry g;
  g.carrier_hz = carrier;
  g.tx_positions = {{0.0, 0.0}};
  g.user_positions = {{0.0, lambda}};
  const FullChannel ch = los_channel(g, std::numeric_limits<double>::infinity(), 0, false);
  const cplx h = ch.h.at(0, 0);
  CHECK(std::abs(h) == doctest::Approx(1.0 / lambda).epsilon(1e-12));
  CHECK(std::abs(std::arg(h)) < 1e-9);  // one full turn
}

TEST_CASE("doubling the range halves the magnitude") {
  const double lambda = kC / 2.4e9;
  Geometry g;
  g.tx_positions = {{0.0, 0.0}};
  g.user_positions = {{0.0, 1.0}, {0.0, 2.0}};
  const FullChannel ch = los_channel(g, std::numeric_limits<double>::infinity(), 0, false);
  CHECK(std::abs(ch.h.at(0, 0)) == doctest::Approx(2.0 * std::abs(ch.h.at(1, 0))).epsilon(1e-12));
  (void)lambda;
}

TEST_CASE("broadside user sees the boresight steering phases in the far field") {
  // far enough that the spherical curvature across the array is negligible
  const Geometry g = Geometry::from_angles(6, 2.4e9, 1e6, {0.0});
  const FullChannel ch = los_channel(g, std::numeric_limits<double>::infinity(), 0, false);
  for (std::size_t i = 1; i < 6; ++i) {
    double d = std::arg(ch.h.at(0, i) * std::conj(ch.h.at(0, i - 1)));
    CHECK(std::abs(d) < 1e-6);
  }
}

TEST_CASE("normalization yields unit mean gain on the two-antenna reference") {
  const Geometry g = Geometry::from_range_separation(2, 2.4e9, 2.0, 1.1);
  const FullChannel ch = los_channel(g);
  double acc = 0.0;
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t i = 0; i < 2; ++i) acc += std::norm(ch.h.at(u, i));
  CHECK(acc / 4.0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("geometry validation") {
  Geometry g = Geometry::from_range_separation(6, 2.4e9, 2.0, 1.1);
  CHECK(g.tx_positions.size() == 6);
  g.tx_positions[3][0] += 0.01;  // break the spacing
  CHECK_THROWS_AS(g.validate(), ConfigError);
  CHECK_THROWS_AS(Geometry::from_range_separation(2, 2.4e9, 1.0, 2.5), ConfigError);
}

TEST_CASE("effective channel collapses chains") {
  FullChannel ch;
  ch.h = CMatrix(2, 6);
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t i = 0; i < 6; ++i) ch.h.at(u, i) = {1.0, 0.0};
  const std::vector<AnalogWeights> ones(2, AnalogWeights(3, cplx{1.0, 0.0}));
  const EffectiveChannel he = effective_channel(ch, ones);
  CHECK(he.source == EffectiveChannel::Source::genie);
  REQUIRE(he.flat());
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t t = 0; t < 2; ++t)
      CHECK(std::abs(he.flat_mat().at(u, t) - cplx{3.0, 0.0}) < 1e-15);

  // different weights produce a different effective channel
  const Codebook& cb = Codebook::builtin();
  std::vector<AnalogWeights> steered(2, weights_for_pattern(cb.at(3), 3));
  const EffectiveChannel he2 = effective_channel(ch, steered);
  CHECK(std::abs(he2.flat_mat().at(0, 0) - he.flat_mat().at(0, 0)) > 0.1);

  CHECK_THROWS_AS(effective_channel(ch, std::vector<AnalogWeights>(2, AnalogWeights(2))),
                  ShapeError);
}

TEST_CASE("steered beams maximize the served user's effective gain") {
  // one user at +20 degrees; sweep the codebook on the +x sub-array
  const Geometry g = Geometry::from_angles(6, 2.4e9, 5.0, {-20.0, 20.0});
  const FullChannel ch = los_channel(g);
  const Codebook& cb = Codebook::builtin();
  double best = -1.0;
  int best_idx = -1;
  for (int m = 0; m < 7; ++m) {
    const std::vector<AnalogWeights> w(2, weights_for_pattern(cb.at(m), 3));
    const EffectiveChannel he = effective_channel(ch, w);
    const double gain = std::abs(he.flat_mat().at(1, 1));  // user 1 via chain 1
    if (gain > best) {
      best = gain;
      best_idx = m;
    }
  }
  CHECK(cb.at(best_idx).steer_deg == 20.0);
}

TEST_CASE("transmit is exact without noise and linear") {
  FullChannel ch;
  ch.h = CMatrix(2, 2);
  ch.h.at(0, 0) = {1.0, 0.5};
  ch.h.at(0, 1) = {-0.3, 0.2};
  ch.h.at(1, 0) = {0.0, -1.0};
  ch.h.at(1, 1) = {0.8, 0.0};
  std::vector<CVec> tx = {{{1, 0}, {0, 1}}, {{2, 0}, {1, 1}}};
  Rng rng(3);
  const auto rx = transmit(tx, ch, NoiseSpec::off(2), rng);
  for (std::size_t u = 0; u < 2; ++u) {
    for (std::size_t s = 0; s < 2; ++s) {
      const cplx want = ch.h.at(u, 0) * tx[0][s] + ch.h.at(u, 1) * tx[1][s];
      CHECK(std::abs(rx[u][s] - want) < 1e-15);
    }
  }
  // linearity with noise disabled
  std::vector<CVec> tx2 = tx;
  for (auto& a : tx2)
    for (auto& v : a) v *= cplx{0.0, 2.0};
  Rng rng2(3);
  const auto rx2 = transmit(tx2, ch, NoiseSpec::off(2), rng2);
  for (std::size_t u = 0; u < 2; ++u)
    for (std::size_t s = 0; s < 2; ++s)
      CHECK(std::abs(rx2[u][s] - rx[u][s] * cplx{0.0, 2.0}) < 1e-12);
}

TEST_CASE("pure-noise transmission has the configured variance") {
  FullChannel ch;
  ch.h = CMatrix(1, 1);
  ch.h.at(0, 0) = {1.0, 0.0};
  const std::size_t n = 100000;
  std::vector<CVec> tx(1, CVec(n, cplx{0.0, 0.0}));
  NoiseSpec noise;
  noise.sigma2_per_user = {0.37};
  Rng rng(99);
  const auto rx = transmit(tx, ch, noise, rng);
  double p = 0.0;
  for (const cplx& v : rx[0]) p += std::norm(v);
  CHECK(p / n == doctest::Approx(0.37).epsilon(0.05));
}

TEST_CASE("fixed seed reproduces the exact same samples") {
  FullChannel ch;
  ch.h = CMatrix(1, 1);
  ch.h.at(0, 0) = {0.5, 0.5};
  std::vector<CVec> tx(1, CVec(64, cplx{1.0, 0.0}));
  NoiseSpec noise;
  noise.sigma2_per_user = {0.1};
  Rng a(5), b(5);
  CHECK(transmit(tx, ch, noise, a) == transmit(tx, ch, noise, b));
}

TEST_CASE("awgn sigma2 helper") {
  CHECK(awgn_sigma2(10.0, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(awgn_sigma2(0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("rician channel is deterministic per seed and keeps mean power") {
  const Geometry g = Geometry::from_range_separation(2, 2.4e9, 2.0, 1.1);
  const FullChannel a = los_channel(g, 6.0, 42);
  const FullChannel b = los_channel(g, 6.0, 42);
  CHECK(CMatrix::max_abs_diff(a.h, b.h) == 0.0);
  CHECK(a.model == "rician");
  const FullChannel c = los_channel(g, 6.0, 43);
  CHECK(CMatrix::max_abs_diff(a.h, c.h) > 0.0);
}

}  // TEST_SUITE
