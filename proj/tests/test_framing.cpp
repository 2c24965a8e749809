// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "sefdm/errors.hpp"
#include "sefdm/framing.hpp"
#include "sefdm/rng.hpp"

using namespace sefdm;

namespace {

std::vector<std::vector<std::uint8_t>> random_payload(const ArchitectureConfig& arch,
                                                      const WaveformConfig& wcfg,
                                                      const FrameConfig& fcfg, unsigned order,
                                                      std::uint64_t seed) {
  const std::size_t need = fcfg.data_symbols() * wcfg.n_data * qam_bits_per_symbol(order);
  std::vector<std::vector<std::uint8_t>> bits(arch.n_users, std::vector<std::uint8_t>(need));
  Rng rng(seed);
  for (auto& b : bits) rng.fill_bits(b);
  return bits;
}

FrameConfig fcfg_for(const ArchitectureConfig& arch) {
  FrameConfig f;
  f.pilot_slots_needed = arch.n_rf;
  return f;
}

constexpr cplx kPilot{0.7071067811865476, 0.7071067811865476};

}  // namespace

TEST_SUITE("framing") {

TEST_CASE("pilot symbol count equals the RF chain count") {
  const WaveformConfig w = WaveformConfig::narrowband_profile(1.0);
  for (auto kind : {ArchKind::HP, ArchKind::FDP_I, ArchKind::FDP_II}) {
    const ArchitectureConfig arch = ArchitectureConfig::make(kind);
    const FrameConfig fcfg = fcfg_for(arch);
    const Frame f = build_frame(random_payload(arch, w, fcfg, 4, 1), arch, w, fcfg, 4, kPilot);
    CHECK(f.pilots.size() == arch.n_rf);
    CHECK(f.data.size() == 2);
    CHECK(f.data[0].size() == 19 * 7);
  }
  // the hybrid frame needs strictly fewer pilot symbols than the six-chain one
  CHECK(ArchitectureConfig::make(ArchKind::HP).n_rf <
        ArchitectureConfig::make(ArchKind::FDP_I).n_rf);
}

TEST_CASE("staggering: exactly one chain transmits during each pilot symbol") {
  const WaveformConfig w = WaveformConfig::narrowband_profile(1.0);
  const ArchitectureConfig arch = ArchitectureConfig::make(ArchKind::FDP_I);
  const FrameConfig fcfg = fcfg_for(arch);
  const Frame f = build_frame(random_payload(arch, w, fcfg, 4, 2), arch, w, fcfg, 4, kPilot);
  for (std::size_t sym = 0; sym < fcfg.symbols_per_slot; ++sym) {
    std::size_t active = 0;
    for (std::size_t chain = 0; chain < arch.n_rf; ++chain) {
      active += f.chain_transmits_at(chain, sym) ? 1 : 0;
    }
    if (f.is_pilot_time(sym)) {
      CHECK(active == 1);
    } else {
      CHECK(active == 0);  // silent remainder of the overhead slot
    }
  }
}

TEST_CASE("zero payload maps every data cell to the zero-bit constellation point") {
  const WaveformConfig w = WaveformConfig::narrowband_profile(1.0);
  const ArchitectureConfig arch = ArchitectureConfig::make(ArchKind::HP);
  const FrameConfig fcfg = fcfg_for(arch);
  const std::size_t need = fcfg.data_symbols() * w.n_data * 2;
  const std::vector<std::vector<std::uint8_t>> zeros(2, std::vector<std::uint8_t>(need, 0));
  const Frame f = build_frame(zeros, arch, w, fcfg, 4, kPilot);
  const cplx want = qam_map(std::vector<std::uint8_t>{0, 0}, 4)[0];
  for (const SymbolVector& cell : f.data[0]) {
    const CVec d = extract_data_subcarriers(cell, w);
    for (const cplx& v : d) CHECK(std::abs(v - want) < 1e-15);
  }
}

TEST_CASE("parse inverts build for every architecture") {
  const WaveformConfig w = WaveformConfig::narrowband_profile(0.9);
  for (auto kind : {ArchKind::HP, ArchKind::FDP_I, ArchKind::FDP_II}) {
    const ArchitectureConfig arch = ArchitectureConfig::make(kind);
    const FrameConfig fcfg = fcfg_for(arch);
    for (unsigned order : {4u, 16u}) {
      const auto bits = random_payload(arch, w, fcfg, order, 77 + order);
      const Frame f = build_frame(bits, arch, w, fcfg, order, kPilot);
      CHECK(parse_frame(f, w) == bits);
    }
  }
}

TEST_CASE("underfilled and overfilled payloads are rejected") {
  const WaveformConfig w = WaveformConfig::narrowband_profile(1.0);
  const ArchitectureConfig arch = ArchitectureConfig::make(ArchKind::HP);
  const FrameConfig fcfg = fcfg_for(arch);
  auto bits = random_payload(arch, w, fcfg, 4, 3);
  bits[1].pop_back();
  CHECK_THROWS_AS(build_frame(bits, arch, w, fcfg, 4, kPilot), ConfigError);
  bits[1].push_back(0);
  bits[1].push_back(0);
  CHECK_THROWS_AS(build_frame(bits, arch, w, fcfg, 4, kPilot), ConfigError);
}

TEST_CASE("frames are deterministic") {
  const WaveformConfig w = WaveformConfig::narrowband_profile(0.9);
  const ArchitectureConfig arch = ArchitectureConfig::make(ArchKind::HP);
  const FrameConfig fcfg = fcfg_for(arch);
  const auto bits = random_payload(arch, w, fcfg, 16, 4);
  const Frame a = build_frame(bits, arch, w, fcfg, 16, kPilot);
  const Frame b = build_frame(bits, arch, w, fcfg, 16, kPilot);
  CHECK(a.data == b.data);
  CHECK(a.pilots == b.pilots);
}

TEST_CASE("cyclic prefix") {
  CVec x(128);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = {static_cast<double>(i), -1.0};

  SUBCASE("zero length is the identity") { CHECK(add_cyclic_prefix(x, 0) == x); }
  SUBCASE("prefix copies the tail") {
    const CVec y = add_cyclic_prefix(x, 10);
    REQUIRE(y.size() == 138);
    for (std::size_t i = 0; i < 10; ++i) CHECK(y[i] == x[118 + i]);
    CHECK(remove_cyclic_prefix(y, 10) == x);
  }
  SUBCASE("prefix longer than the block is rejected") {
    CHECK_THROWS_AS(add_cyclic_prefix(CVec(4), 5), ConfigError);
  }
}

TEST_CASE("guard band mapping") {
  const WaveformConfig w = WaveformConfig::narrowband_profile(1.0);
  CHECK(guard_offset(w) == 58);

  const CVec ones(12, cplx{1.0, 0.0});
  const SymbolVector full = map_guard_bands(ones, w);
  REQUIRE(full.size() == 128);
  for (std::size_t i = 0; i < 128; ++i) {
    if (i >= 58 && i < 70) {
      CHECK(full[i] == cplx{1.0, 0.0});
    } else {
      CHECK(full[i] == cplx{0.0, 0.0});
    }
  }
  CHECK(extract_data_subcarriers(full, w) == ones);

  const SymbolVector zero = map_guard_bands(CVec(12, cplx{0.0, 0.0}), w);
  for (const cplx& v : zero) CHECK(v == cplx{0.0, 0.0});

  CHECK_THROWS_AS(map_guard_bands(CVec(11), w), ShapeError);
}

TEST_CASE("binary waveform dump round trip and layout") {
  const std::string path = "test_frame_dump.iq";
  std::vector<CVec> chains(2);
  chains[0] = {{1.0, -2.0}, {0.25, 0.75}};
  chains[1] = {{-1.5, 0.5}, {3.0, -4.0}};
  dump_frame_iq(path, chains);

  // layout: magic, version, counts, then float32 I/Q pairs per chain
  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::memcmp(magic, "SEIQ", 4) == 0);
  std::uint32_t version = 0, n_chains = 0, n_samples = 0;
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&n_chains), 4);
  is.read(reinterpret_cast<char*>(&n_samples), 4);
  CHECK(version == 1);
  CHECK(n_chains == 2);
  CHECK(n_samples == 2);
  float iq[2];
  is.read(reinterpret_cast<char*>(iq), 8);
  CHECK(iq[0] == 1.0f);
  CHECK(iq[1] == -2.0f);

  const std::vector<CVec> back = load_frame_iq(path);
  REQUIRE(back.size() == 2);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t s = 0; s < 2; ++s)
      CHECK(std::abs(back[c][s] - chains[c][s]) < 1e-6);  // float32 precision
  std::remove(path.c_str());
}

}  // TEST_SUITE
