// SPDX-License-Identifier: Apache-2.0
//
// Time-frequency frame assembly: 20 slots per frame, the first slot is
// overhead carrying one pilot symbol per RF chain, staggered so that no two
// chains sound the channel at the same time. The remaining slots carry data
// on all chains simultaneously. Guard bands flank the data block in frequency.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sefdm/arch.hpp"
#include "sefdm/types.hpp"
#include "sefdm/waveform.hpp"

namespace sefdm {

struct FrameConfig {
  std::size_t slots_per_frame = 20;
  std::size_t overhead_slots = 1;
  std::size_t pilot_slots_needed = 2;  // = n_rf
  std::size_t symbols_per_slot = 7;

  std::size_t data_slots() const { return slots_per_frame - overhead_slots; }
  std::size_t data_symbols() const { return data_slots() * symbols_per_slot; }
  std::size_t total_symbols() const { return slots_per_frame * symbols_per_slot; }

  void validate() const;
};

// Logical frame content before any precoding: per-chain pilot vectors for the
// overhead slot plus per-user data symbol vectors for every data cell.
struct Frame {
  FrameConfig cfg;
  std::size_t n_chains = 0;
  std::size_t n_users = 0;
  unsigned order = 4;

  std::vector<SymbolVector> pilots;             // [chain], guard-mapped, length N
  std::vector<std::vector<SymbolVector>> data;  // [user][data cell], guard-mapped

  // Pilot cells sit at overhead symbol t, one per chain; at that symbol time
  // every other chain is silent.
  bool is_pilot_time(std::size_t symbol_index) const { return symbol_index < n_chains; }
  bool chain_transmits_at(std::size_t chain, std::size_t symbol_index) const {
    return is_pilot_time(symbol_index) ? symbol_index == chain
                                       : symbol_index >= cfg.overhead_slots * cfg.symbols_per_slot;
  }
};

// Packs per-user bits into a frame. Bit counts must exactly fill the data
// region: data_symbols * n_data * log2(order) per user; anything else is an
// underrun/overrun error, never padded.
Frame build_frame(const std::vector<std::vector<std::uint8_t>>& bits_per_user,
                  const ArchitectureConfig& arch, const WaveformConfig& wcfg,
                  const FrameConfig& fcfg, unsigned order, cplx pilot_value);

// Inverse of build_frame over the data region.
std::vector<std::vector<std::uint8_t>> parse_frame(const Frame& frame, const WaveformConfig& wcfg);

CVec add_cyclic_prefix(std::span<const cplx> x, std::size_t cp_len);
CVec remove_cyclic_prefix(std::span<const cplx> x, std::size_t cp_len);

// Places n_data values in the center block of an n_total vector, zeros
// elsewhere (split guard bands, left half rounded down).
SymbolVector map_guard_bands(std::span<const cplx> data_symbols, const WaveformConfig& wcfg);
CVec extract_data_subcarriers(std::span<const cplx> full, const WaveformConfig& wcfg);
std::size_t guard_offset(const WaveformConfig& wcfg);

// Binary waveform dump: "SEIQ", u32 version, u32 n_chains, u32 n_samples,
// then per chain n_samples interleaved I/Q float32 pairs, little-endian.
void dump_frame_iq(const std::string& path, const std::vector<CVec>& per_chain_time);
std::vector<CVec> load_frame_iq(const std::string& path);

}  // namespace sefdm
