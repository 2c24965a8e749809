// SPDX-License-Identifier: Apache-2.0
#include "sefdm/beamforming.hpp"

#include <cmath>
#include <cstdio>

#include "sefdm/errors.hpp"
#include "sefdm/kernels.hpp"

namespace sefdm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
}  // namespace

const Codebook& Codebook::builtin() {
  static const Codebook cb{{{{0, 0.0, 0.0, 1},
                             {1, 10.0, 32.0, 1},
                             {2, 20.0, 62.0, 1},
                             {3, 30.0, 90.0, 1},
                             {4, -10.0, 32.0, -1},
                             {5, -20.0, 62.0, -1},
                             {6, -30.0, 90.0, -1}}},
                           0.5,
                           3};
  return cb;
}

const BeamPattern& Codebook::at(int index) const {
  if (index < 0 || index >= static_cast<int>(patterns.size()))
    throw ConfigError("codebook: pattern index out of range");
  return patterns[static_cast<std::size_t>(index)];
}

std::string Codebook::to_csv() const {
  std::string out = "index,steer_deg,rel_phase_deg\n";
  char line[64];
  for (const BeamPattern& p : patterns) {
    std::snprintf(line, sizeof(line), "%d,%g,%g\n", p.index, p.steer_deg, p.rel_phase_deg);
    out += line;
  }
  return out;
}

double relative_phase_offset_deg(double steer_deg, double spacing_wavelengths) {
  return 360.0 * spacing_wavelengths * std::sin(steer_deg * kDegToRad);
}

AnalogWeights weights_for_pattern(const BeamPattern& p, int antennas_per_chain) {
  if (antennas_per_chain < 1) throw ConfigError("weights_for_pattern: need at least one antenna");
  AnalogWeights w(static_cast<std::size_t>(antennas_per_chain));
  const double step = p.rel_phase_deg * kDegToRad * static_cast<double>(p.sign);
  for (int i = 0; i < antennas_per_chain; ++i) {
    w[static_cast<std::size_t>(i)] = std::polar(1.0, -static_cast<double>(i) * step);
  }
  return w;
}

cplx array_response(const AnalogWeights& w, double theta_deg, double spacing_wavelengths) {
  const double psi = 2.0 * kPi * spacing_wavelengths * std::sin(theta_deg * kDegToRad);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * std::polar(1.0, psi * static_cast<double>(i));
  }
  return acc;
}

double measure_beam_power(std::span<const cplx> rx_pilot) {
  if (rx_pilot.empty()) throw ShapeError("measure_beam_power: empty pilot");
  return kernels::sum_abs2(rx_pilot.data(), rx_pilot.size()) / static_cast<double>(rx_pilot.size());
}

int select_beam(std::span<const double> powers) {
  if (powers.size() != 7) throw ShapeError("select_beam: expected one power per codebook pattern");
  int best = 0;
  for (int i = 1; i < 7; ++i) {
    if (powers[static_cast<std::size_t>(i)] > powers[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

}  // namespace sefdm
