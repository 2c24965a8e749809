// SPDX-License-Identifier: Apache-2.0
#include "sefdm/precoding.hpp"

#include <cmath>
#include <sstream>

#include "sefdm/errors.hpp"

namespace sefdm {

EffectiveChannel estimate_channel(const std::vector<std::vector<CVec>>& rx_pilots,
                                  const std::vector<CVec>& pilots, bool per_subcarrier) {
  const std::size_t n_users = rx_pilots.size();
  if (n_users == 0) throw ShapeError("estimate_channel: no users");
  const std::size_t n_chains = pilots.size();
  if (n_chains == 0) throw ShapeError("estimate_channel: no pilots");
  const std::size_t n_sc = pilots.front().size();
  for (const CVec& p : pilots) {
    if (p.size() != n_sc) throw ShapeError("estimate_channel: pilot lengths differ");
    for (const cplx& v : p) {
      if (std::abs(v) < 1e-12) throw NumericError("estimate_channel: degenerate pilot value");
    }
  }
  for (const auto& per_user : rx_pilots) {
    if (per_user.size() != n_chains) throw ShapeError("estimate_channel: pilot slot count mismatch");
    for (const CVec& y : per_user) {
      if (y.size() != n_sc) throw ShapeError("estimate_channel: received pilot length mismatch");
    }
  }

  EffectiveChannel out;
  out.source = EffectiveChannel::Source::estimated;
  if (per_subcarrier) {
    out.per_subcarrier.assign(n_sc, CMatrix(n_users, n_chains));
    for (std::size_t k = 0; k < n_sc; ++k)
      for (std::size_t u = 0; u < n_users; ++u)
        for (std::size_t t = 0; t < n_chains; ++t)
          out.per_subcarrier[k].at(u, t) = rx_pilots[u][t][k] / pilots[t][k];
  } else {
    CMatrix h(n_users, n_chains);
    for (std::size_t u = 0; u < n_users; ++u) {
      for (std::size_t t = 0; t < n_chains; ++t) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < n_sc; ++k) acc += rx_pilots[u][t][k] / pilots[t][k];
        h.at(u, t) = acc / static_cast<double>(n_sc);
      }
    }
    out.per_subcarrier.push_back(std::move(h));
  }
  return out;
}

CMatrix build_digital_precoder(const CMatrix& h_eff, double cond_limit) {
  if (h_eff.rows() == 0 || h_eff.cols() < h_eff.rows())
    throw ShapeError("digital precoder: need at least as many chains as users");
  const double cond = condition_number(h_eff);
  if (!(cond < cond_limit)) {
    std::ostringstream msg;
    msg << "digital precoder: effective channel rank-deficient for users 0.."
        << h_eff.rows() - 1 << " (cond=" << cond << ")";
    throw NumericError(msg.str());
  }
  return right_pinv(h_eff);
}

std::vector<CVec> apply_digital_precoding(const CMatrix& d, const std::vector<CVec>& streams) {
  if (streams.size() != d.cols()) throw ShapeError("digital precoding: stream count mismatch");
  const std::size_t n_sc = streams.empty() ? 0 : streams.front().size();
  for (const CVec& s : streams) {
    if (s.size() != n_sc) throw ShapeError("digital precoding: stream lengths differ");
  }
  std::vector<CVec> out(d.rows(), CVec(n_sc));
  for (std::size_t t = 0; t < d.rows(); ++t) {
    for (std::size_t k = 0; k < n_sc; ++k) {
      cplx acc{0.0, 0.0};
      for (std::size_t u = 0; u < d.cols(); ++u) acc += d.at(t, u) * streams[u][k];
      out[t][k] = acc;
    }
  }
  return out;
}

}  // namespace sefdm
