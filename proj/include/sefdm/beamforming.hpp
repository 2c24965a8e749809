// SPDX-License-Identifier: Apache-2.0
//
// Analogue beam codebook and selection for a 3-element half-wavelength
// phase-shifter array. Beams are steered by applying a fixed relative phase
// offset between adjacent shifters; the best pattern is the one with the
// highest received pilot power at the target user.
#pragma once

#include <array>
#include <span>
#include <string>

#include "sefdm/types.hpp"

namespace sefdm {

struct BeamPattern {
  int index = 0;
  double steer_deg = 0.0;      // beam direction
  double rel_phase_deg = 0.0;  // phase offset between adjacent shifters (stored unsigned)
  int sign = 1;                // +1 right hemisphere, -1 left (mirrored patterns)
};

// Phase-only weights for one RF chain, one entry per shifter; |w| = 1 always.
using AnalogWeights = CVec;

struct Codebook {
  std::array<BeamPattern, 7> patterns;
  double spacing_wavelengths = 0.5;
  int antennas_per_chain = 3;

  // The built-in 7-pattern table: boresight plus +-10, +-20, +-30 degrees with
  // published offsets 32, 62, 90 degrees (rounded to whole-degree shifter
  // steps; the exact geometric values differ by up to 0.75 degrees).
  static const Codebook& builtin();

  const BeamPattern& at(int index) const;

  // "index,steer_deg,rel_phase_deg" header plus one row per pattern
  std::string to_csv() const;
};

// Geometric relative phase offset between adjacent shifters, in degrees,
// for a beam steered to steer_deg: 360 * (d/lambda) * sin(steer).
double relative_phase_offset_deg(double steer_deg, double spacing_wavelengths);

// Weight of shifter i (0-based) is exp(-j * i * phase * sign).
AnalogWeights weights_for_pattern(const BeamPattern& p, int antennas_per_chain);

// Far-field array factor sum_i w_i * exp(j 2 pi (d/lambda) i sin(theta)).
cplx array_response(const AnalogWeights& w, double theta_deg, double spacing_wavelengths);

// Mean |.|^2 over the demodulated data sub-carriers of one pilot symbol.
double measure_beam_power(std::span<const cplx> rx_pilot);

// Index of the largest power; ties break to the lowest index.
int select_beam(std::span<const double> powers);

}  // namespace sefdm
