// SPDX-License-Identifier: Apache-2.0
//
// Reproducible geometric line-of-sight downlink channel: a uniform linear
// transmit array on the x-axis, single-antenna users in front of it, spherical
// path lengths (no plane-wave shortcut), optional Rician scatter, and AWGN
// with explicitly configured per-user variance.
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "sefdm/beamforming.hpp"
#include "sefdm/linalg.hpp"
#include "sefdm/precoding.hpp"
#include "sefdm/rng.hpp"
#include "sefdm/types.hpp"

namespace sefdm {

struct Geometry {
  std::vector<std::array<double, 2>> tx_positions;    // meters
  std::vector<std::array<double, 2>> user_positions;  // meters
  double carrier_hz = 2.4e9;

  double wavelength_m() const { return 299792458.0 / carrier_hz; }

  // n_tx-element line centered on the origin at half-wavelength spacing, with
  // users placed at the given range from the array center.
  static Geometry from_angles(std::size_t n_tx, double carrier_hz, double range_m,
                              const std::vector<double>& user_angles_deg);

  // Users at the given range from the array center, separated laterally by
  // sep_m and symmetric about boresight.
  static Geometry from_range_separation(std::size_t n_tx, double carrier_hz, double range_m,
                                        double sep_m);

  void validate() const;
};

struct FullChannel {
  CMatrix h;  // n_users x n_tx
  std::string model = "los";
};

// h(u,i) = (1/r) exp(-j 2 pi r / lambda) with exact spherical range r.
// A finite rician_k_db adds a seeded scattered component at the matching
// per-entry power. When normalize is set the matrix is scaled so that a
// two-antenna reference subarray at the array center has unit mean |h|^2,
// keeping SNR sweeps comparable across array sizes.
FullChannel los_channel(const Geometry& geom,
                        double rician_k_db = std::numeric_limits<double>::infinity(),
                        std::uint64_t seed = 0, bool normalize = true);

// Collapses the antenna dimension through the per-chain analogue weights:
// h_eff(u,t) = sum_{i in chain t} h(u, i) * w_t[i]. Chain t drives the
// consecutive antenna block [t*apc, (t+1)*apc).
EffectiveChannel effective_channel(const FullChannel& full,
                                   const std::vector<AnalogWeights>& per_chain);

struct NoiseSpec {
  std::vector<double> sigma2_per_user;  // complex noise variance per sample
  bool enabled = true;

  static NoiseSpec off(std::size_t n_users) { return {std::vector<double>(n_users, 0.0), false}; }
};

// noise variance for a target SNR against a reference signal power
double awgn_sigma2(double snr_db, double ref_power);

// rx[u] = sum_i h(u,i) tx[i] + z, z drawn per sample from the user's stream.
std::vector<CVec> transmit(const std::vector<CVec>& tx_per_antenna, const FullChannel& ch,
                           const NoiseSpec& noise, Rng& rng);

}  // namespace sefdm
