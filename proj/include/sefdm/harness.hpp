// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: runs the full three-stage downlink per frame
// (analogue beam selection from staggered pilots, digital zero-forcing from
// least-squares channel estimates, waveform pre-equalization for compressed
// signals), sweeps architecture/waveform/order/SNR grids, and persists CSV
// results plus plot-ready curve files.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "sefdm/arch.hpp"
#include "sefdm/channel.hpp"
#include "sefdm/framing.hpp"
#include "sefdm/metrics.hpp"
#include "sefdm/waveform.hpp"

namespace sefdm {

// Geometry inputs; the actual antenna line is built per architecture since
// array sizes differ.
struct GeometrySpec {
  double carrier_hz = 2.4e9;
  double range_m = 2.0;
  double user_sep_m = 1.1;
  std::vector<double> user_angles_deg;  // overrides user_sep_m when non-empty

  Geometry build(std::size_t n_tx) const;
};

struct LinkOptions {
  bool noise_enabled = true;
  bool genie_csi = false;          // use the exact effective channel instead of estimating
  bool per_subcarrier_csi = false;
  std::size_t symbols_per_slot = 7;
  GeometrySpec geometry;
  double rician_k_db = std::numeric_limits<double>::infinity();  // inf = pure line of sight
};

struct PointResult {
  MetricsReport report;
  std::vector<int> selected_patterns;  // per chain; empty for fully digital runs
  std::vector<double> reference_power;  // per user, noiseless demodulated data power
};

// One sweep point: beam selection once, then n_frames independent frames, each
// re-estimating the channel from its overhead slot. Frames may run on
// n_threads workers; results are reduced in frame order so the outcome is
// independent of the thread count.
PointResult run_point(const ArchitectureConfig& arch, const WaveformConfig& wcfg, unsigned order,
                      double snr_db, std::size_t n_frames, std::uint64_t point_seed,
                      const LinkOptions& options = {}, std::size_t n_threads = 1);

// Single-frame convenience wrapper.
MetricsReport run_link(const ArchitectureConfig& arch, const WaveformConfig& wcfg, unsigned order,
                       double snr_db, std::uint64_t seed, const LinkOptions& options = {});

// Noiseless probe: transmit with every user but `active_user` silenced and
// return the worst ratio of a silenced user's received data power to the
// active user's. Quantifies inter-user zero-forcing accuracy.
double measure_leakage(const ArchitectureConfig& arch, const WaveformConfig& wcfg, unsigned order,
                       std::uint64_t seed, std::size_t active_user,
                       const LinkOptions& options = {});

// Beam-selection-only run; returns the per-chain selected pattern indices.
std::vector<int> select_beams_only(const ArchitectureConfig& arch, const WaveformConfig& wcfg,
                                   double snr_db, std::uint64_t seed,
                                   const LinkOptions& options = {});

struct SweepSpec {
  std::vector<ArchKind> archs{ArchKind::FDP_I, ArchKind::FDP_II, ArchKind::HP};
  std::vector<std::string> waveforms{"ofdm", "sefdm"};
  std::vector<unsigned> orders{4, 16};
  std::vector<double> snr_db{0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
  std::size_t frames = 200;
  std::uint64_t master_seed = 1;
  double alpha = 0.9;  // compression factor used by the sefdm entries
  WaveformConfig profile = WaveformConfig::narrowband_profile(1.0);
  LinkOptions options;

  void validate() const;
  WaveformConfig waveform_for(const std::string& name) const;
};

// Flat key=value configuration (comma-separated lists, '#' comments).
SweepSpec parse_sweep_config(const std::string& text);
SweepSpec load_sweep_config(const std::string& path);

// Derives the per-point seed from the point's content, not its position in
// the sweep, so adding points never changes existing rows.
std::uint64_t point_seed(std::uint64_t master, ArchKind arch, const std::string& waveform,
                         unsigned order, double snr_db, double alpha);

// Runs the whole grid and writes one CSV row per (point, user):
//   arch,waveform,alpha,order,snr_db,user,evm_db,ber,se_e,eta,frames,seed
// Deterministic under a fixed master seed, byte-identical across repeated runs
// and thread counts. On failure a "# TRUNCATED: ..." marker is flushed before
// the error propagates.
void run_sweep(const SweepSpec& spec, const std::string& out_csv_path, std::size_t n_threads = 1,
               std::ostream* progress = nullptr);

// Splits a sweep CSV into two-column (snr metric) files, one per
// arch/waveform/order curve, averaging the users. metric is one of
// evm|ber|se|ee. Returns the written paths.
std::vector<std::string> emit_plot_data(const std::string& csv_path, const std::string& metric,
                                        const std::string& out_dir);

// Compact invariant suite behind the `selftest` CLI verb.
bool run_selftest(std::ostream& out);

}  // namespace sefdm
