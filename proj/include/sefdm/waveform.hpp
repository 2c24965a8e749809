// SPDX-License-Identifier: Apache-2.0
//
// Multicarrier waveform core: modulation/demodulation matrices for
// bandwidth-compressed (alpha < 1) and orthogonal (alpha = 1) signals, the
// sub-carrier correlation matrix, the zero-forcing pre-equalizer that removes
// the self-created inter-carrier interference, and square-QAM mapping.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sefdm/linalg.hpp"
#include "sefdm/types.hpp"

namespace sefdm {

struct WaveformConfig {
  std::size_t n_total = 0;         // total sub-carriers N (also IFFT-style block length)
  std::size_t n_data = 0;          // occupied data sub-carriers N_d
  double alpha = 1.0;              // bandwidth compression factor, 1 = orthogonal
  std::size_t cp_len = 0;          // cyclic prefix samples
  double fs_hz = 0.0;              // sampling rate
  double subcarrier_bw_hz = 0.0;   // per-sub-carrier bandwidth

  bool is_ofdm() const { return alpha == 1.0; }

  // Occupied bandwidth: the data block spans n_data sub-carriers at spacing
  // alpha * subcarrier_bw_hz; alpha = 1 reduces to the orthogonal case.
  double occupied_bw_hz() const { return static_cast<double>(n_data) * subcarrier_bw_hz * alpha; }

  void validate() const;  // throws ConfigError

  // 1.92 MHz / 128 carriers / 12 data / CP 10 / 15 kHz narrowband profile
  static WaveformConfig narrowband_profile(double alpha);
};

// N x N matrix F with entry (k, n) = exp(j 2 pi n k alpha / N) / sqrt(N).
// Indices are 0-based internally; a 1-based convention would only introduce
// constant phase factors that cancel between modulate and demodulate.
class ModulationMatrix {
 public:
  explicit ModulationMatrix(const WaveformConfig& cfg);

  std::size_t size() const { return n_; }
  double alpha() const { return alpha_; }
  const CMatrix& fwd() const { return f_; }       // F
  const CMatrix& adj() const { return fh_; }      // F^H, materialized for the hot path

 private:
  std::size_t n_ = 0;
  double alpha_ = 1.0;
  CMatrix f_;
  CMatrix fh_;
};

// time samples X = F S
CVec modulate(const ModulationMatrix& f, std::span<const cplx> symbols);

// projection R = F^H Y; for noiseless Y = F S this equals C S
CVec demodulate(const ModulationMatrix& f, std::span<const cplx> samples);

// Sub-carrier correlation matrix C = F^H F in closed form:
//   c(m,n) = 1                                                   for m = n
//   c(m,n) = (1 - e^{j2 pi alpha (m-n)}) / (N (1 - e^{j2 pi alpha (m-n)/N}))  otherwise
// Hermitian by construction; the identity when alpha = 1.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(const WaveformConfig& cfg);

  // Correlation restricted to the occupied (data) sub-carriers of the full
  // grid: the n_data x n_data central block of the n_total-grid matrix. This
  // is the coupling that matters for pre-equalization; the full grid is
  // numerically rank-deficient for compressed configurations at large N
  // (its spectrum decays exponentially past alpha*N), while the occupied
  // block stays well conditioned.
  static CorrelationMatrix occupied_block(const WaveformConfig& cfg);

  std::size_t size() const { return n_; }
  double alpha() const { return alpha_; }
  const CMatrix& mat() const { return c_; }

  // largest/smallest singular-value ratio, computed at construction
  double condition() const { return cond_; }

 private:
  CorrelationMatrix() = default;

  std::size_t n_ = 0;
  double alpha_ = 1.0;
  CMatrix c_;
  double cond_ = 1.0;
};

// Zero-forcing pre-equalizer W = C^H (C C^H)^{-1}; C W = I. Refuses matrices
// whose singular-value ratio exceeds cond_limit, where the inversion would
// only amplify deviations beyond usefulness.
CMatrix build_waveform_precoder(const CorrelationMatrix& c, double cond_limit = 1e8);

// Gray-mapped square QAM with unit average symbol energy. Orders 4 and 16.
CVec qam_map(std::span<const std::uint8_t> bits, unsigned order);
std::vector<std::uint8_t> qam_demap(std::span<const cplx> symbols, unsigned order);
const CVec& qam_constellation(unsigned order);
unsigned qam_bits_per_symbol(unsigned order);

}  // namespace sefdm
