// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>

namespace sefdm {

// FDP_I : fully digital, 6 RF chains driving 6 antennas directly
// FDP_II: fully digital, 2 RF chains driving 2 antennas directly
// HP    : hybrid, 2 RF chains each split across 3 phase shifters (6 antennas)
enum class ArchKind { FDP_I, FDP_II, HP };

struct ArchitectureConfig {
  ArchKind kind = ArchKind::HP;
  std::size_t n_rf = 2;
  std::size_t n_tx = 6;
  std::size_t n_users = 2;
  std::size_t n_splitters = 2;
  std::size_t n_shifters = 6;

  static ArchitectureConfig make(ArchKind kind);
  static ArchKind kind_from_string(const std::string& s);  // throws ConfigError

  std::size_t antennas_per_chain() const { return n_tx / n_rf; }
  bool is_hybrid() const { return kind == ArchKind::HP; }
  std::size_t n_rf_devices() const { return n_rf; }  // one radio per RF chain
  std::string name() const;

  void validate() const;
};

}  // namespace sefdm
