// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>

#include "sefdm/errors.hpp"
#include "sefdm/rng.hpp"
#include "sefdm/waveform.hpp"

using namespace sefdm;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

WaveformConfig cfg_of(std::size_t n, double alpha, std::size_t n_data = 0) {
  WaveformConfig c;
  c.n_total = n;
  c.n_data = n_data == 0 ? n : n_data;
  c.alpha = alpha;
  c.cp_len = 0;
  c.fs_hz = 1.92e6;
  c.subcarrier_bw_hz = 15e3;
  return c;
}

// direct evaluation of the defining sum, independent of the matrix path:
// X_k = (1/sqrt(N)) sum_n S_n exp(j 2 pi n k alpha / N)
CVec brute_modulate(std::span<const cplx> s, double alpha) {
  const std::size_t n = s.size();
  CVec x(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t sc = 0; sc < n; ++sc) {
      acc += s[sc] * std::polar(1.0, kTwoPi * static_cast<double>(sc) * static_cast<double>(k) *
                                         alpha / static_cast<double>(n));
    }
    x[k] = acc / std::sqrt(static_cast<double>(n));
  }
  return x;
}

// direct projection sum over the sample index for the correlation entry
cplx brute_correlation(std::size_t m, std::size_t n, std::size_t n_total, double alpha) {
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < n_total; ++k) {
    const double ph = kTwoPi * alpha * (static_cast<double>(n) - static_cast<double>(m)) *
                      static_cast<double>(k) / static_cast<double>(n_total);
    acc += std::polar(1.0 / static_cast<double>(n_total), ph);
  }
  return acc;
}

CVec random_symbols(Rng& rng, std::size_t n) {
  CVec s(n);
  for (auto& v : s) v = {rng.normal(), rng.normal()};
  return s;
}

}  // namespace

TEST_SUITE("waveform") {

TEST_CASE("config validation") {
  CHECK_THROWS_AS(ModulationMatrix(cfg_of(0, 1.0)), ConfigError);
  CHECK_THROWS_AS(ModulationMatrix(cfg_of(8, 0.0)), ConfigError);
  CHECK_THROWS_AS(ModulationMatrix(cfg_of(8, 1.5)), ConfigError);
  WaveformConfig bad = cfg_of(8, 0.9);
  bad.n_data = 9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("orthogonal configuration gives a unitary matrix") {
  const ModulationMatrix f(cfg_of(4, 1.0));
  const CMatrix p = f.adj() * f.fwd();
  CHECK(CMatrix::max_abs_diff(p, CMatrix::identity(4)) < 1e-12);
}

TEST_CASE("every entry has magnitude 1/sqrt(N)") {
  const ModulationMatrix f(cfg_of(128, 0.9, 12));
  const double want = 1.0 / std::sqrt(128.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < 128; ++k)
    for (std::size_t n = 0; n < 128; ++n)
      worst = std::max(worst, std::abs(std::abs(f.fwd().at(k, n)) - want));
  CHECK(worst < 1e-14);
}

TEST_CASE("modulating a unit vector returns the matching column") {
  const ModulationMatrix f(cfg_of(8, 0.9));
  CVec s(8, cplx{0.0, 0.0});
  s[3] = {1.0, 0.0};
  const CVec x = modulate(f, s);
  const CVec oracle = brute_modulate(s, 0.9);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(std::abs(x[k] - f.fwd().at(k, 3)) < 1e-14);
    CHECK(std::abs(x[k] - oracle[k]) < 1e-12);
  }
}

TEST_CASE("modulate basics") {
  const ModulationMatrix f(cfg_of(12, 0.9));
  CHECK_THROWS_AS(modulate(f, CVec(5)), ShapeError);

  const CVec zeros(12, cplx{0.0, 0.0});
  for (const cplx& v : modulate(f, zeros)) CHECK(std::abs(v) == 0.0);

  Rng rng(21);
  const CVec s = random_symbols(rng, 12);
  const CVec x = modulate(f, s);
  const CVec oracle = brute_modulate(s, 0.9);
  for (std::size_t k = 0; k < 12; ++k) CHECK(std::abs(x[k] - oracle[k]) < 1e-12);
}

TEST_CASE("orthogonal round trip recovers the symbols") {
  const ModulationMatrix f(cfg_of(16, 1.0));
  Rng rng(22);
  const CVec s = random_symbols(rng, 16);
  const CVec r = demodulate(f, modulate(f, s));
  for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(r[i] - s[i]) < 1e-10);
}

TEST_CASE("projection of a compressed signal is the correlation mix") {
  const WaveformConfig cfg = cfg_of(12, 0.9);
  const ModulationMatrix f(cfg);
  const CorrelationMatrix c(cfg);
  Rng rng(23);
  const CVec s = random_symbols(rng, 12);
  const CVec r = demodulate(f, modulate(f, s));
  const CVec want = c.mat().apply(s);
  for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(r[i] - want[i]) < 1e-10);

  const CVec zeros(12, cplx{0.0, 0.0});
  for (const cplx& v : demodulate(f, zeros)) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("correlation matrix closed form") {
  SUBCASE("identity when orthogonal") {
    const CorrelationMatrix c(cfg_of(16, 1.0));
    CHECK(CMatrix::max_abs_diff(c.mat(), CMatrix::identity(16)) < 1e-12);
  }
  SUBCASE("unit diagonal, hermitian") {
    const CorrelationMatrix c(cfg_of(12, 0.9));
    for (std::size_t i = 0; i < 12; ++i) CHECK(c.mat().at(i, i) == cplx{1.0, 0.0});
    CHECK(CMatrix::max_abs_diff(c.mat(), c.mat().adjoint()) < 1e-12);
  }
  SUBCASE("matches the direct projection sum") {
    const CorrelationMatrix c(cfg_of(12, 0.9));
    CHECK(std::abs(c.mat().at(1, 2) - brute_correlation(1, 2, 12, 0.9)) < 1e-10);
    for (std::size_t n : {4u, 8u, 12u, 16u}) {
      for (double alpha : {0.8, 0.9, 1.0}) {
        const CorrelationMatrix cm(cfg_of(n, alpha));
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst, std::abs(cm.mat().at(i, j) - brute_correlation(i, j, n, alpha)));
        CHECK(worst < 1e-10);
      }
    }
  }
}

TEST_CASE("matched-filter identity: projection matrix equals the gram matrix") {
  for (double alpha : {0.8, 0.9, 1.0}) {
    const WaveformConfig cfg = cfg_of(128, alpha, 12);
    const ModulationMatrix f(cfg);
    const CorrelationMatrix c(cfg);
    CHECK(CMatrix::max_abs_diff(f.adj() * f.fwd(), c.mat()) < 1e-10);
  }
}

TEST_CASE("signal energy equals the quadratic form through the gram matrix") {
  const WaveformConfig cfg = cfg_of(24, 0.9);
  const ModulationMatrix f(cfg);
  const CorrelationMatrix c(cfg);
  Rng rng(24);
  const CVec s = random_symbols(rng, 24);
  const CVec x = modulate(f, s);
  double ex = 0.0;
  for (const cplx& v : x) ex += std::norm(v);
  const CVec cs = c.mat().apply(s);
  cplx quad{0.0, 0.0};
  for (std::size_t i = 0; i < 24; ++i) quad += std::conj(s[i]) * cs[i];
  CHECK(ex == doctest::Approx(quad.real()).epsilon(1e-9));
}

TEST_CASE("waveform precoder") {
  SUBCASE("identity when orthogonal") {
    const CorrelationMatrix c(cfg_of(8, 1.0));
    const CMatrix w = build_waveform_precoder(c);
    CHECK(CMatrix::max_abs_diff(w, CMatrix::identity(8)) < 1e-10);
  }
  SUBCASE("right inverse of the correlation matrix") {
    const CorrelationMatrix c(cfg_of(12, 0.9));
    const CMatrix w = build_waveform_precoder(c);
    CHECK(CMatrix::max_abs_diff(c.mat() * w, CMatrix::identity(12)) < 1e-8);
  }
  SUBCASE("pre-equalized round trip is transparent") {
    const WaveformConfig cfg = cfg_of(12, 0.9);
    const ModulationMatrix f(cfg);
    const CorrelationMatrix c(cfg);
    const CMatrix w = build_waveform_precoder(c);
    Rng rng(25);
    const CVec s = random_symbols(rng, 12);
    const CVec r = demodulate(f, modulate(f, w.apply(s)));
    for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(r[i] - s[i]) < 1e-7);
  }
  SUBCASE("refuses an ill-conditioned correlation matrix") {
    const CorrelationMatrix c(cfg_of(16, 0.5));
    CHECK(c.condition() > 1e8);
    try {
      build_waveform_precoder(c);
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("alpha=0.5") != std::string::npos);
      CHECK(msg.find("N=16") != std::string::npos);
    }
  }
}

TEST_CASE("occupied-block correlation matches the central block of the full grid") {
  const WaveformConfig cfg = WaveformConfig::narrowband_profile(0.9);
  const CorrelationMatrix block = CorrelationMatrix::occupied_block(cfg);
  CHECK(block.size() == 12);
  // entries are toeplitz in the sub-carrier distance on the full 128 grid
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j)
      CHECK(std::abs(block.mat().at(i, j) - brute_correlation(i, j, 128, 0.9)) < 1e-10);
  CHECK(block.condition() < 10.0);  // well conditioned where the full grid is singular
  const CMatrix w = build_waveform_precoder(block);
  CHECK(CMatrix::max_abs_diff(block.mat() * w, CMatrix::identity(12)) < 1e-10);
}

TEST_CASE("qam mapping") {
  SUBCASE("unit-magnitude quadrants at order 4") {
    const std::vector<std::uint8_t> bits = {0, 0, 0, 1, 1, 1, 1, 0};
    const CVec s = qam_map(bits, 4);
    REQUIRE(s.size() == 4);
    for (const cplx& v : s) CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-12));
    // all four quadrants hit
    CHECK(s[0].real() < 0);
    CHECK(s[0].imag() < 0);
    CHECK(s[1].real() < 0);
    CHECK(s[1].imag() > 0);
    CHECK(s[2].real() > 0);
    CHECK(s[2].imag() > 0);
    CHECK(s[3].real() > 0);
    CHECK(s[3].imag() < 0);
  }
  SUBCASE("unit mean energy at order 16") {
    double p = 0.0;
    for (const cplx& v : qam_constellation(16)) p += std::norm(v);
    CHECK(p / 16.0 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("gray neighbors differ in one bit") {
    const CVec& pts = qam_constellation(16);
    for (unsigned a = 0; a < 16; ++a) {
      for (unsigned b = 0; b < 16; ++b) {
        const double d = std::abs(pts[a] - pts[b]);
        if (a != b && d < 2.0 / std::sqrt(10.0) + 1e-9) {
          const unsigned diff = a ^ b;
          CHECK((diff & (diff - 1)) == 0);  // single-bit difference
        }
      }
    }
  }
  SUBCASE("demap inverts map over random bits") {
    Rng rng(26);
    for (unsigned order : {4u, 16u}) {
      std::vector<std::uint8_t> bits(10000 - 10000 % qam_bits_per_symbol(order));
      rng.fill_bits(bits);
      CHECK(qam_demap(qam_map(bits, order), order) == bits);
    }
  }
  SUBCASE("rejects unsupported orders and ragged bit counts") {
    CHECK_THROWS_AS(qam_map(std::vector<std::uint8_t>(4), 8), ConfigError);
    CHECK_THROWS_AS(qam_map(std::vector<std::uint8_t>(5), 16), ConfigError);
  }
}

TEST_CASE("occupied bandwidth follows the compression factor") {
  CHECK(WaveformConfig::narrowband_profile(1.0).occupied_bw_hz() == doctest::Approx(180e3));
  CHECK(WaveformConfig::narrowband_profile(0.9).occupied_bw_hz() == doctest::Approx(162e3));
}

}  // TEST_SUITE
