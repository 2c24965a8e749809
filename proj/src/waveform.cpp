// SPDX-License-Identifier: Apache-2.0
#include "sefdm/waveform.hpp"

#include <cmath>
#include <sstream>

#include "sefdm/errors.hpp"

namespace sefdm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void WaveformConfig::validate() const {
  if (n_total == 0) throw ConfigError("waveform: n_total must be positive");
  if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("waveform: alpha must satisfy 0 < alpha <= 1");
  if (n_data > n_total) throw ConfigError("waveform: n_data exceeds n_total");
  if (fs_hz < 0.0 || subcarrier_bw_hz < 0.0) throw ConfigError("waveform: negative rates");
}

WaveformConfig WaveformConfig::narrowband_profile(double alpha) {
  WaveformConfig cfg;
  cfg.n_total = 128;
  cfg.n_data = 12;
  cfg.alpha = alpha;
  cfg.cp_len = 10;
  cfg.fs_hz = 1.92e6;
  cfg.subcarrier_bw_hz = 15e3;
  cfg.validate();
  return cfg;
}

ModulationMatrix::ModulationMatrix(const WaveformConfig& cfg) {
  cfg.validate();
  n_ = cfg.n_total;
  alpha_ = cfg.alpha;
  f_ = CMatrix(n_, n_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t n = 0; n < n_; ++n) {
      const double phase = kTwoPi * static_cast<double>(n) * static_cast<double>(k) * alpha_ /
                           static_cast<double>(n_);
      f_.at(k, n) = std::polar(scale, phase);
    }
  }
  fh_ = f_.adjoint();
}

CVec modulate(const ModulationMatrix& f, std::span<const cplx> symbols) {
  if (symbols.size() != f.size()) throw ShapeError("modulate: symbol vector length mismatch");
  return f.fwd().apply(symbols);
}

CVec demodulate(const ModulationMatrix& f, std::span<const cplx> samples) {
  if (samples.size() != f.size()) throw ShapeError("demodulate: sample vector length mismatch");
  return f.adj().apply(samples);
}

namespace {

// closed-form entry for sub-carrier distance d = n - m on an n_grid-point
// grid; entry (m,n) is the inner product of basis vectors m and n, so that
// the assembled matrix equals F^H F exactly
cplx correlation_entry(double d, double alpha, double n_grid) {
  if (d == 0.0) return {1.0, 0.0};
  const cplx num = 1.0 - std::polar(1.0, kTwoPi * alpha * d);
  const cplx den = n_grid * (1.0 - std::polar(1.0, kTwoPi * alpha * d / n_grid));
  return num / den;
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(const WaveformConfig& cfg) {
  cfg.validate();
  n_ = cfg.n_total;
  alpha_ = cfg.alpha;
  c_ = CMatrix(n_, n_);
  const double grid = static_cast<double>(cfg.n_total);
  for (std::size_t m = 0; m < n_; ++m)
    for (std::size_t n = 0; n < n_; ++n)
      c_.at(m, n) = correlation_entry(static_cast<double>(n) - static_cast<double>(m), alpha_, grid);
  cond_ = condition_number(c_);
}

CorrelationMatrix CorrelationMatrix::occupied_block(const WaveformConfig& cfg) {
  cfg.validate();
  if (cfg.n_data == 0) throw ConfigError("correlation: no occupied sub-carriers");
  CorrelationMatrix c;
  c.n_ = cfg.n_data;
  c.alpha_ = cfg.alpha;
  c.c_ = CMatrix(c.n_, c.n_);
  const double grid = static_cast<double>(cfg.n_total);
  for (std::size_t m = 0; m < c.n_; ++m)
    for (std::size_t n = 0; n < c.n_; ++n)
      c.c_.at(m, n) =
          correlation_entry(static_cast<double>(n) - static_cast<double>(m), c.alpha_, grid);
  c.cond_ = condition_number(c.c_);
  return c;
}

CMatrix build_waveform_precoder(const CorrelationMatrix& c, double cond_limit) {
  if (!(c.condition() < cond_limit)) {
    std::ostringstream msg;
    msg << "waveform precoder: correlation matrix ill-conditioned (cond=" << c.condition()
        << ", alpha=" << c.alpha() << ", N=" << c.size() << ")";
    throw NumericError(msg.str());
  }
  // C is a Hermitian positive definite Gram matrix, so the right
  // pseudo-inverse C^H (C C^H)^{-1} collapses to C^{-1}; solving on C itself
  // instead of C C^H avoids squaring the condition number.
  const CMatrix& cm = c.mat();
  return cholesky_solve(cholesky(cm), CMatrix::identity(cm.rows()));
}

namespace {

// odd-integer amplitude levels in Gray order, e.g. m=2: 00,01,11,10 -> -3,-1,+1,+3
unsigned gray_to_index(unsigned g) {
  unsigned b = 0;
  for (; g; g >>= 1) b ^= g;
  return b;
}

unsigned index_to_gray(unsigned i) { return i ^ (i >> 1); }

struct QamSpec {
  unsigned bits_per_axis;
  double scale;  // normalizes mean symbol energy to 1
};

QamSpec qam_spec(unsigned order) {
  switch (order) {
    case 4:
      return {1, 1.0 / std::sqrt(2.0)};
    case 16:
      return {2, 1.0 / std::sqrt(10.0)};
    default:
      throw ConfigError("qam: unsupported constellation order " + std::to_string(order));
  }
}

double axis_level(unsigned gray_bits, unsigned m) {
  const unsigned idx = gray_to_index(gray_bits);
  return 2.0 * static_cast<double>(idx) - (static_cast<double>(1u << m) - 1.0);
}

unsigned slice_axis(double v, unsigned m, double scale) {
  const double max_idx = static_cast<double>((1u << m) - 1);
  double idx = std::round((v / scale + max_idx) / 2.0);
  if (idx < 0.0) idx = 0.0;
  if (idx > max_idx) idx = max_idx;
  return index_to_gray(static_cast<unsigned>(idx));
}

}  // namespace

unsigned qam_bits_per_symbol(unsigned order) { return 2 * qam_spec(order).bits_per_axis; }

CVec qam_map(std::span<const std::uint8_t> bits, unsigned order) {
  const QamSpec spec = qam_spec(order);
  const unsigned m = spec.bits_per_axis;
  const unsigned nb = 2 * m;
  if (bits.size() % nb != 0) throw ConfigError("qam_map: bit count not divisible by bits/symbol");
  CVec out(bits.size() / nb);
  for (std::size_t s = 0; s < out.size(); ++s) {
    unsigned gi = 0, gq = 0;
    for (unsigned b = 0; b < m; ++b) gi = (gi << 1) | bits[s * nb + b];
    for (unsigned b = 0; b < m; ++b) gq = (gq << 1) | bits[s * nb + m + b];
    out[s] = cplx{axis_level(gi, m), axis_level(gq, m)} * spec.scale;
  }
  return out;
}

std::vector<std::uint8_t> qam_demap(std::span<const cplx> symbols, unsigned order) {
  const QamSpec spec = qam_spec(order);
  const unsigned m = spec.bits_per_axis;
  const unsigned nb = 2 * m;
  std::vector<std::uint8_t> bits(symbols.size() * nb);
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const unsigned gi = slice_axis(symbols[s].real(), m, spec.scale);
    const unsigned gq = slice_axis(symbols[s].imag(), m, spec.scale);
    for (unsigned b = 0; b < m; ++b) bits[s * nb + b] = (gi >> (m - 1 - b)) & 1u;
    for (unsigned b = 0; b < m; ++b) bits[s * nb + m + b] = (gq >> (m - 1 - b)) & 1u;
  }
  return bits;
}

const CVec& qam_constellation(unsigned order) {
  static const CVec qam4 = [] {
    CVec pts(4);
    for (unsigned v = 0; v < 4; ++v) {
      const std::uint8_t b[2] = {static_cast<std::uint8_t>((v >> 1) & 1u),
                                 static_cast<std::uint8_t>(v & 1u)};
      pts[v] = qam_map(std::span<const std::uint8_t>(b, 2), 4)[0];
    }
    return pts;
  }();
  static const CVec qam16 = [] {
    CVec pts(16);
    for (unsigned v = 0; v < 16; ++v) {
      std::uint8_t b[4];
      for (unsigned i = 0; i < 4; ++i) b[i] = static_cast<std::uint8_t>((v >> (3 - i)) & 1u);
      pts[v] = qam_map(std::span<const std::uint8_t>(b, 4), 16)[0];
    }
    return pts;
  }();
  switch (order) {
    case 4:
      return qam4;
    case 16:
      return qam16;
    default:
      throw ConfigError("qam: unsupported constellation order " + std::to_string(order));
  }
}

}  // namespace sefdm
