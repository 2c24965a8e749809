// SPDX-License-Identifier: Apache-2.0
#include "sefdm/channel.hpp"

#include <cmath>

#include "sefdm/errors.hpp"
#include "sefdm/kernels.hpp"

namespace sefdm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

std::vector<std::array<double, 2>> line_positions(std::size_t n_tx, double spacing_m) {
  std::vector<std::array<double, 2>> pos(n_tx);
  const double offset = 0.5 * static_cast<double>(n_tx - 1);
  for (std::size_t i = 0; i < n_tx; ++i) {
    pos[i] = {(static_cast<double>(i) - offset) * spacing_m, 0.0};
  }
  return pos;
}

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return std::sqrt(dx * dx + dy * dy);
}

cplx los_coeff(const std::array<double, 2>& user, const std::array<double, 2>& tx, double lambda) {
  const double r = dist(user, tx);
  if (r <= 0.0) throw ConfigError("geometry: user collocated with a transmit antenna");
  return std::polar(1.0 / r, -2.0 * kPi * r / lambda);
}
}  // namespace

Geometry Geometry::from_angles(std::size_t n_tx, double carrier_hz, double range_m,
                               const std::vector<double>& user_angles_deg) {
  Geometry g;
  g.carrier_hz = carrier_hz;
  g.tx_positions = line_positions(n_tx, 0.5 * g.wavelength_m());
  for (double a : user_angles_deg) {
    g.user_positions.push_back({range_m * std::sin(a * kDegToRad), range_m * std::cos(a * kDegToRad)});
  }
  g.validate();
  return g;
}

Geometry Geometry::from_range_separation(std::size_t n_tx, double carrier_hz, double range_m,
                                         double sep_m) {
  const double half = 0.5 * sep_m;
  if (half >= range_m) throw ConfigError("geometry: separation too large for range");
  Geometry g;
  g.carrier_hz = carrier_hz;
  g.tx_positions = line_positions(n_tx, 0.5 * g.wavelength_m());
  const double y = std::sqrt(range_m * range_m - half * half);
  g.user_positions.push_back({-half, y});
  g.user_positions.push_back({half, y});
  g.validate();
  return g;
}

void Geometry::validate() const {
  if (tx_positions.empty()) throw ConfigError("geometry: no transmit antennas");
  if (user_positions.empty()) throw ConfigError("geometry: no users");
  if (carrier_hz <= 0.0) throw ConfigError("geometry: carrier frequency must be positive");
  const double d = 0.5 * wavelength_m();
  for (std::size_t i = 1; i < tx_positions.size(); ++i) {
    const double s = dist(tx_positions[i], tx_positions[i - 1]);
    if (std::abs(s - d) > 1e-9) throw ConfigError("geometry: antennas not at half-wavelength spacing");
  }
  for (const auto& u : user_positions) {
    for (const auto& t : tx_positions) {
      if (dist(u, t) <= 0.0) throw ConfigError("geometry: zero-range link");
    }
  }
}

FullChannel los_channel(const Geometry& geom, double rician_k_db, std::uint64_t seed,
                        bool normalize) {
  geom.validate();
  const double lambda = geom.wavelength_m();
  const std::size_t n_users = geom.user_positions.size();
  const std::size_t n_tx = geom.tx_positions.size();

  FullChannel ch;
  ch.h = CMatrix(n_users, n_tx);
  for (std::size_t u = 0; u < n_users; ++u)
    for (std::size_t i = 0; i < n_tx; ++i)
      ch.h.at(u, i) = los_coeff(geom.user_positions[u], geom.tx_positions[i], lambda);

  if (std::isfinite(rician_k_db)) {
    // scattered component with per-entry power matched to the direct path
    const double k_lin = std::pow(10.0, rician_k_db / 10.0);
    const double w_los = std::sqrt(k_lin / (k_lin + 1.0));
    const double w_sc = std::sqrt(1.0 / (k_lin + 1.0));
    Rng rng(mix_seed(seed, 0x5CA77E72ULL));
    for (std::size_t u = 0; u < n_users; ++u) {
      for (std::size_t i = 0; i < n_tx; ++i) {
        const double p = std::abs(ch.h.at(u, i));
        ch.h.at(u, i) = w_los * ch.h.at(u, i) + w_sc * p * rng.complex_normal(1.0);
      }
    }
    ch.model = "rician";
  }

  if (normalize) {
    // reference: two-antenna subarray centered on the array, the smallest
    // configuration in the comparison set
    Geometry ref;
    ref.carrier_hz = geom.carrier_hz;
    ref.tx_positions = line_positions(2, 0.5 * lambda);
    ref.user_positions = geom.user_positions;
    double acc = 0.0;
    for (const auto& u : ref.user_positions)
      for (const auto& t : ref.tx_positions) acc += std::norm(los_coeff(u, t, lambda));
    const double mean_gain = acc / static_cast<double>(ref.user_positions.size() * 2);
    const double scale = 1.0 / std::sqrt(mean_gain);
    for (std::size_t u = 0; u < n_users; ++u)
      for (std::size_t i = 0; i < n_tx; ++i) ch.h.at(u, i) *= scale;
  }
  return ch;
}

EffectiveChannel effective_channel(const FullChannel& full,
                                   const std::vector<AnalogWeights>& per_chain) {
  const std::size_t n_users = full.h.rows();
  const std::size_t n_tx = full.h.cols();
  const std::size_t n_chains = per_chain.size();
  if (n_chains == 0) throw ShapeError("effective_channel: no chains");
  const std::size_t apc = per_chain.front().size();
  for (const AnalogWeights& w : per_chain) {
    if (w.size() != apc) throw ShapeError("effective_channel: chains have different widths");
  }
  if (n_chains * apc != n_tx) throw ShapeError("effective_channel: chain map does not cover array");

  EffectiveChannel out;
  out.source = EffectiveChannel::Source::genie;
  CMatrix h(n_users, n_chains);
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t t = 0; t < n_chains; ++t) {
      cplx acc{0.0, 0.0};
      for (std::size_t i = 0; i < apc; ++i) acc += full.h.at(u, t * apc + i) * per_chain[t][i];
      h.at(u, t) = acc;
    }
  }
  out.per_subcarrier.push_back(std::move(h));
  return out;
}

double awgn_sigma2(double snr_db, double ref_power) {
  return ref_power * std::pow(10.0, -snr_db / 10.0);
}

std::vector<CVec> transmit(const std::vector<CVec>& tx_per_antenna, const FullChannel& ch,
                           const NoiseSpec& noise, Rng& rng) {
  const std::size_t n_tx = ch.h.cols();
  const std::size_t n_users = ch.h.rows();
  if (tx_per_antenna.size() != n_tx) throw ShapeError("transmit: antenna stream count mismatch");
  const std::size_t n_samples = tx_per_antenna.empty() ? 0 : tx_per_antenna.front().size();
  for (const CVec& s : tx_per_antenna) {
    if (s.size() != n_samples) throw ShapeError("transmit: antenna streams have different lengths");
  }
  if (noise.enabled && noise.sigma2_per_user.size() != n_users)
    throw ShapeError("transmit: noise spec does not cover all users");

  std::vector<CVec> rx(n_users, CVec(n_samples, cplx{0.0, 0.0}));
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t i = 0; i < n_tx; ++i) {
      kernels::caxpy(ch.h.at(u, i), tx_per_antenna[i].data(), rx[u].data(), n_samples);
    }
    if (noise.enabled && noise.sigma2_per_user[u] > 0.0) {
      const double s2 = noise.sigma2_per_user[u];
      for (std::size_t k = 0; k < n_samples; ++k) rx[u][k] += rng.complex_normal(s2);
    }
  }
  return rx;
}

}  // namespace sefdm
