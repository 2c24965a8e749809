// SPDX-License-Identifier: Apache-2.0
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

struct PowerModel {
  double p_rf_device_w = 38.0;   // one software radio per RF chain
  double p_shifter_w = 0.25;
  std::size_t n_rf_devices = 0;
  std::size_t n_shifters = 0;

  static PowerModel for_arch(const ArchitectureConfig& arch);
  double total_w() const {
    return static_cast<double>(n_rf_devices) * p_rf_device_w +
           static_cast<double>(n_shifters) * p_shifter_w;
  }
};

// 10 log10( mean|rx - ref|^2 / mean|ref|^2 ), floored at -100 dB so perfect
// reception stays finite.
double evm_db(std::span<const cplx> rx, std::span<const cplx> ref);

double ber(std::span<const std::uint8_t> rx_bits, std::span<const std::uint8_t> tx_bits);

// (1 - ber) * fs * log2(order) * (n_data / n_total) / occupied_bw
double effective_se(double ber_value, const WaveformConfig& wcfg, unsigned order);

// spectral efficiency per consumed watt
double energy_efficiency(double se_e, const PowerModel& pm);

struct MetricsReport {
  std::string arch;
  std::string waveform;
  double alpha = 1.0;
  unsigned order = 4;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  std::size_t frames = 0;

  std::vector<double> evm_db;   // per user
  std::vector<double> ber;      // per user
  std::vector<double> se_e;     // per user
  std::vector<double> eta;      // per user
  std::vector<std::size_t> bit_errors;
  std::vector<std::size_t> bits_compared;
  std::vector<std::size_t> symbols_compared;
  std::vector<double> err2;     // raw error-vector power sums behind evm_db
  std::vector<double> ref2;

  // mean per-sample transmit power summed over antennas; raw zero-forcing has
  // no power normalization, so this varies with channel conditioning
  double mean_tx_power = 0.0;
};

// Frame-level tallies that merge associatively so frames can be processed in
// any order (or in parallel) without changing the result.
struct MetricsAccumulator {
  std::size_t n_users = 0;
  std::vector<double> err2;       // sum |rx - ref|^2
  std::vector<double> ref2;       // sum |ref|^2
  std::vector<double> rx2;        // sum |rx|^2, for power probes
  std::vector<std::size_t> bit_errors;
  std::vector<std::size_t> bits;
  std::vector<std::size_t> symbols;
  double tx_power_sum = 0.0;      // sum over samples of per-sample power
  std::size_t tx_samples = 0;

  explicit MetricsAccumulator(std::size_t users = 0)
      : n_users(users), err2(users, 0.0), ref2(users, 0.0), rx2(users, 0.0),
        bit_errors(users, 0), bits(users, 0), symbols(users, 0) {}

  void add_symbols(std::size_t user, std::span<const cplx> rx, std::span<const cplx> ref);
  void add_bits(std::size_t user, std::span<const std::uint8_t> rx,
                std::span<const std::uint8_t> tx);
  void merge(const MetricsAccumulator& other);

  MetricsReport finalize(const ArchitectureConfig& arch, const WaveformConfig& wcfg,
                         unsigned order, double snr_db, std::uint64_t seed,
                         std::size_t frames) const;
};

}  // namespace sefdm
