// SPDX-License-Identifier: Apache-2.0
#include "sefdm/metrics.hpp"

#include <cmath>

#include "sefdm/errors.hpp"
#include "sefdm/kernels.hpp"

namespace sefdm {

namespace {
constexpr double kEvmFloorDb = -100.0;
}

PowerModel PowerModel::for_arch(const ArchitectureConfig& arch) {
  PowerModel pm;
  pm.n_rf_devices = arch.n_rf_devices();
  pm.n_shifters = arch.n_shifters;
  return pm;
}

double evm_db(std::span<const cplx> rx, std::span<const cplx> ref) {
  if (rx.size() != ref.size()) throw ShapeError("evm: vector lengths differ");
  if (rx.empty()) throw ShapeError("evm: empty input");
  const double err2 = kernels::sum_err2(rx.data(), ref.data(), rx.size());
  const double ref2 = kernels::sum_abs2(ref.data(), ref.size());
  if (ref2 <= 0.0) throw NumericError("evm: reference has zero power");
  const double ratio = err2 / ref2;
  if (ratio <= 0.0) return kEvmFloorDb;
  return std::max(kEvmFloorDb, 10.0 * std::log10(ratio));
}

double ber(std::span<const std::uint8_t> rx_bits, std::span<const std::uint8_t> tx_bits) {
  if (rx_bits.size() != tx_bits.size()) throw ShapeError("ber: bit streams differ in length");
  if (rx_bits.empty()) throw ShapeError("ber: empty input");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < rx_bits.size(); ++i) errors += (rx_bits[i] != tx_bits[i]) ? 1u : 0u;
  return static_cast<double>(errors) / static_cast<double>(rx_bits.size());
}

double effective_se(double ber_value, const WaveformConfig& wcfg, unsigned order) {
  if (ber_value < 0.0 || ber_value > 1.0) throw ConfigError("effective_se: ber out of range");
  const double bits = static_cast<double>(qam_bits_per_symbol(order));
  const double occupancy = static_cast<double>(wcfg.n_data) / static_cast<double>(wcfg.n_total);
  return (1.0 - ber_value) * wcfg.fs_hz * bits * occupancy / wcfg.occupied_bw_hz();
}

double energy_efficiency(double se_e, const PowerModel& pm) {
  const double total = pm.total_w();
  if (!(total > 0.0)) throw ConfigError("energy_efficiency: non-positive power budget");
  return se_e / total;
}

void MetricsAccumulator::add_symbols(std::size_t user, std::span<const cplx> rx,
                                     std::span<const cplx> ref) {
  if (rx.size() != ref.size()) throw ShapeError("metrics: symbol spans differ");
  err2[user] += kernels::sum_err2(rx.data(), ref.data(), rx.size());
  ref2[user] += kernels::sum_abs2(ref.data(), ref.size());
  rx2[user] += kernels::sum_abs2(rx.data(), rx.size());
  symbols[user] += rx.size();
}

void MetricsAccumulator::add_bits(std::size_t user, std::span<const std::uint8_t> rx,
                                  std::span<const std::uint8_t> tx) {
  if (rx.size() != tx.size()) throw ShapeError("metrics: bit spans differ");
  for (std::size_t i = 0; i < rx.size(); ++i) bit_errors[user] += (rx[i] != tx[i]) ? 1u : 0u;
  bits[user] += rx.size();
}

void MetricsAccumulator::merge(const MetricsAccumulator& other) {
  if (other.n_users != n_users) throw ShapeError("metrics: merging different user counts");
  for (std::size_t u = 0; u < n_users; ++u) {
    err2[u] += other.err2[u];
    ref2[u] += other.ref2[u];
    rx2[u] += other.rx2[u];
    bit_errors[u] += other.bit_errors[u];
    bits[u] += other.bits[u];
    symbols[u] += other.symbols[u];
  }
  tx_power_sum += other.tx_power_sum;
  tx_samples += other.tx_samples;
}

MetricsReport MetricsAccumulator::finalize(const ArchitectureConfig& arch,
                                           const WaveformConfig& wcfg, unsigned order,
                                           double snr_db, std::uint64_t seed,
                                           std::size_t frames) const {
  const PowerModel pm = PowerModel::for_arch(arch);
  MetricsReport r;
  r.arch = arch.name();
  r.waveform = wcfg.is_ofdm() ? "ofdm" : "sefdm";
  r.alpha = wcfg.alpha;
  r.order = order;
  r.snr_db = snr_db;
  r.seed = seed;
  r.frames = frames;
  for (std::size_t u = 0; u < n_users; ++u) {
    const double ratio = (ref2[u] > 0.0) ? err2[u] / ref2[u] : 0.0;
    r.evm_db.push_back(ratio > 0.0 ? std::max(-100.0, 10.0 * std::log10(ratio)) : -100.0);
    const double b =
        bits[u] > 0 ? static_cast<double>(bit_errors[u]) / static_cast<double>(bits[u]) : 0.0;
    r.ber.push_back(b);
    const double se = effective_se(b, wcfg, order);
    r.se_e.push_back(se);
    r.eta.push_back(energy_efficiency(se, pm));
    r.bit_errors.push_back(bit_errors[u]);
    r.bits_compared.push_back(bits[u]);
    r.symbols_compared.push_back(symbols[u]);
    r.err2.push_back(err2[u]);
    r.ref2.push_back(ref2[u]);
  }
  r.mean_tx_power = tx_samples > 0 ? tx_power_sum / static_cast<double>(tx_samples) : 0.0;
  return r;
}

}  // namespace sefdm
