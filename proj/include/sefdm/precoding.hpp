// SPDX-License-Identifier: Apache-2.0
//
// Digital zero-forcing across users: least-squares channel estimation from
// staggered pilots, right pseudo-inverse precoder, and per-sub-carrier
// application to the user streams.
#pragma once

#include <vector>

#include "sefdm/linalg.hpp"
#include "sefdm/types.hpp"

namespace sefdm {

struct EffectiveChannel {
  enum class Source { estimated, genie };

  // One n_users x n_rf matrix when the channel is treated as flat, or one
  // matrix per data sub-carrier when per-sub-carrier estimation is enabled.
  std::vector<CMatrix> per_subcarrier;
  Source source = Source::estimated;

  bool flat() const { return per_subcarrier.size() == 1; }
  const CMatrix& flat_mat() const { return per_subcarrier.front(); }
};

// rx_pilots[u][t] holds the demodulated data-sub-carrier values of chain t's
// pilot symbol seen at user u; pilots[t] holds the transmitted pilot values on
// those sub-carriers. Estimate is h(u,t) = rx/pilot, averaged over the data
// sub-carriers unless per_subcarrier is requested.
EffectiveChannel estimate_channel(const std::vector<std::vector<CVec>>& rx_pilots,
                                  const std::vector<CVec>& pilots,
                                  bool per_subcarrier = false);

// Right pseudo-inverse D = H^H (H H^H)^{-1}; H D = I for full-row-rank H.
// Throws NumericError when H H^H is singular or the singular-value ratio
// exceeds cond_limit.
CMatrix build_digital_precoder(const CMatrix& h_eff, double cond_limit = 1e8);

// Per sub-carrier: out[chain][k] = sum_u D(chain, u) * streams[u][k].
std::vector<CVec> apply_digital_precoding(const CMatrix& d, const std::vector<CVec>& streams);

}  // namespace sefdm
