// SPDX-License-Identifier: Apache-2.0
#include "sefdm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "sefdm/errors.hpp"
#include "sefdm/kernels.hpp"
#include "sefdm/precoding.hpp"
#include "sefdm/rng.hpp"

namespace sefdm {

// ---------------------------------------------------------------------------
// architecture table
// ---------------------------------------------------------------------------

ArchitectureConfig ArchitectureConfig::make(ArchKind kind) {
  switch (kind) {
    case ArchKind::FDP_I:
      return {kind, 6, 6, 2, 0, 0};
    case ArchKind::FDP_II:
      return {kind, 2, 2, 2, 0, 0};
    case ArchKind::HP:
      return {kind, 2, 6, 2, 2, 6};
  }
  throw ConfigError("architecture: unknown kind");
}

ArchKind ArchitectureConfig::kind_from_string(const std::string& s) {
  std::string k;
  for (char c : s) {
    if (c == '-' || c == '_' || c == ' ') continue;
    k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (k == "fdp1" || k == "fdpi") return ArchKind::FDP_I;
  if (k == "fdp2" || k == "fdpii") return ArchKind::FDP_II;
  if (k == "hp") return ArchKind::HP;
  throw ConfigError("architecture: unknown name '" + s + "' (use fdp1, fdp2 or hp)");
}

std::string ArchitectureConfig::name() const {
  switch (kind) {
    case ArchKind::FDP_I: return "FDP-I";
    case ArchKind::FDP_II: return "FDP-II";
    case ArchKind::HP: return "HP";
  }
  return "?";
}

void ArchitectureConfig::validate() const {
  if (n_rf == 0 || n_tx == 0 || n_users == 0) throw ConfigError("architecture: empty dimensions");
  if (n_rf < n_users) throw ConfigError("architecture: fewer RF chains than users");
  if (kind == ArchKind::HP) {
    if (n_tx != 3 * n_rf) throw ConfigError("architecture: hybrid needs 3 antennas per chain");
    if (n_shifters != n_tx || n_splitters != n_rf)
      throw ConfigError("architecture: hybrid shifter/splitter counts inconsistent");
  } else {
    if (n_tx != n_rf) throw ConfigError("architecture: fully digital needs one antenna per chain");
  }
}

// ---------------------------------------------------------------------------
// link session
// ---------------------------------------------------------------------------

Geometry GeometrySpec::build(std::size_t n_tx) const {
  if (!user_angles_deg.empty())
    return Geometry::from_angles(n_tx, carrier_hz, range_m, user_angles_deg);
  return Geometry::from_range_separation(n_tx, carrier_hz, range_m, user_sep_m);
}

namespace {

// unit-magnitude constellation corner used for every pilot cell
constexpr cplx kPilotValue{0.70710678118654752440, 0.70710678118654752440};

constexpr std::uint64_t kRefTag = 0xA1;
constexpr std::uint64_t kSweepTag = 0xA2;
constexpr std::uint64_t kFrameTag = 0xA3;
constexpr std::uint64_t kChannelTag = 0xA4;

class LinkSession {
 public:
  LinkSession(const ArchitectureConfig& arch, const WaveformConfig& wcfg, unsigned order,
              const LinkOptions& opt, std::uint64_t channel_seed)
      : arch_(arch), wcfg_(wcfg), order_(order), opt_(opt), mod_(wcfg) {
    arch_.validate();
    fcfg_.pilot_slots_needed = arch_.n_rf;
    fcfg_.symbols_per_slot = opt.symbols_per_slot;
    fcfg_.validate();
    // pre-equalize the occupied band only; guards stay empty and the full
    // grid inverse is numerically meaningless for compressed large-N setups
    if (!wcfg_.is_ofdm()) wp_ = build_waveform_precoder(CorrelationMatrix::occupied_block(wcfg_));
    geom_ = opt.geometry.build(arch_.n_tx);
    ch_ = los_channel(geom_, opt.rician_k_db, channel_seed, true);

    pilot_data_.assign(wcfg_.n_data, kPilotValue);
    pilot_full_ = map_guard_bands(pilot_data_, wcfg_);
    // compressed pilots are pre-equalized like data so that the received
    // projection divides back to the plain pilot value per sub-carrier
    pilot_tx_time_ = chain_symbol_time(pilot_full_);
  }

  const ArchitectureConfig& arch() const { return arch_; }
  std::size_t n_users() const { return arch_.n_users; }

  std::vector<AnalogWeights> unity_weights() const {
    return std::vector<AnalogWeights>(arch_.n_rf,
                                      AnalogWeights(arch_.antennas_per_chain(), cplx{1.0, 0.0}));
  }

  std::vector<AnalogWeights> weights_for(const std::vector<int>& selected) const {
    if (!arch_.is_hybrid()) return unity_weights();
    const Codebook& cb = Codebook::builtin();
    std::vector<AnalogWeights> w;
    w.reserve(selected.size());
    for (int idx : selected)
      w.push_back(weights_for_pattern(cb.at(idx), cb.antennas_per_chain));
    return w;
  }

  std::vector<int> default_patterns() const {
    return std::vector<int>(arch_.n_rf, 0);  // boresight
  }

  // One staggered pilot block (one symbol per chain) under the given weights;
  // returns the demodulated data-sub-carrier pilot observations [user][chain].
  std::vector<std::vector<CVec>> sound_pilots(const std::vector<AnalogWeights>& weights,
                                              const NoiseSpec& noise, Rng& rng,
                                              MetricsAccumulator* acc = nullptr) const {
    const std::size_t sym_len = wcfg_.n_total + wcfg_.cp_len;
    std::vector<CVec> chain_time(arch_.n_rf, CVec(arch_.n_rf * sym_len, cplx{0.0, 0.0}));
    for (std::size_t t = 0; t < arch_.n_rf; ++t) {
      std::copy(pilot_tx_time_.begin(), pilot_tx_time_.end(),
                chain_time[t].begin() + static_cast<std::ptrdiff_t>(t * sym_len));
    }
    const std::vector<CVec> ant = antennas_from_chains(chain_time, weights, acc);
    const std::vector<CVec> rx = transmit(ant, ch_, noise, rng);

    std::vector<std::vector<CVec>> obs(n_users(), std::vector<CVec>(arch_.n_rf));
    for (std::size_t u = 0; u < n_users(); ++u) {
      for (std::size_t t = 0; t < arch_.n_rf; ++t) {
        obs[u][t] = rx_symbol_data(rx[u], t);
      }
    }
    return obs;
  }

  // One sweep sounding slot under the given weights. The whole allocated slot
  // is used: the stagger is repeated floor(symbols_per_slot / n_rf) times, and
  // each user's per-pattern statistic is the mean of its per-symbol pilot
  // power measurements.
  std::vector<double> sweep_slot_power(const std::vector<AnalogWeights>& weights,
                                       const NoiseSpec& noise, Rng& rng) const {
    const std::size_t reps = std::max<std::size_t>(1, fcfg_.symbols_per_slot / arch_.n_rf);
    const std::size_t sym_len = wcfg_.n_total + wcfg_.cp_len;
    const std::size_t n_syms = reps * arch_.n_rf;
    std::vector<CVec> chain_time(arch_.n_rf, CVec(n_syms * sym_len, cplx{0.0, 0.0}));
    for (std::size_t r = 0; r < reps; ++r) {
      for (std::size_t t = 0; t < arch_.n_rf; ++t) {
        std::copy(pilot_tx_time_.begin(), pilot_tx_time_.end(),
                  chain_time[t].begin() +
                      static_cast<std::ptrdiff_t>((r * arch_.n_rf + t) * sym_len));
      }
    }
    const std::vector<CVec> ant = antennas_from_chains(chain_time, weights, nullptr);
    const std::vector<CVec> rx = transmit(ant, ch_, noise, rng);
    std::vector<double> power(n_users(), 0.0);
    for (std::size_t u = 0; u < n_users(); ++u) {
      for (std::size_t r = 0; r < reps; ++r) {
        power[u] += measure_beam_power(rx_symbol_data(rx[u], r * arch_.n_rf + u));
      }
      power[u] /= static_cast<double>(reps);
    }
    return power;
  }

  // Sweep all codebook patterns, one sounding slot each, and pick, per user,
  // the one with the highest received pilot power on that user's own chain.
  std::vector<int> select_beams(const NoiseSpec& noise, Rng& rng) const {
    if (!arch_.is_hybrid()) return {};
    const Codebook& cb = Codebook::builtin();
    const std::size_t n_pat = cb.patterns.size();
    std::vector<std::vector<double>> power(n_users(), std::vector<double>(n_pat, 0.0));
    for (std::size_t m = 0; m < n_pat; ++m) {
      std::vector<AnalogWeights> w(arch_.n_rf,
                                   weights_for_pattern(cb.at(static_cast<int>(m)),
                                                       cb.antennas_per_chain));
      const std::vector<double> p = sweep_slot_power(w, noise, rng);
      for (std::size_t u = 0; u < n_users(); ++u) {
        power[u][m] = p[u];
      }
    }
    std::vector<int> selected(arch_.n_rf);
    for (std::size_t t = 0; t < arch_.n_rf; ++t) {
      selected[t] = select_beam(power[t]);
    }
    return selected;
  }

  // Full frame: overhead sounding, channel estimate, per-frame precoder, data
  // slots, receiver metrics. zero_user silences one user's data for leakage
  // probes; force_genie bypasses estimation regardless of the options.
  MetricsAccumulator run_frame(Rng& rng, const std::vector<AnalogWeights>& weights,
                               const NoiseSpec& noise, int zero_user = -1,
                               bool force_genie = false) const {
    MetricsAccumulator acc(n_users());
    const unsigned bps = qam_bits_per_symbol(order_);
    const std::size_t bits_needed = fcfg_.data_symbols() * wcfg_.n_data * bps;
    std::vector<std::vector<std::uint8_t>> bits(n_users(), std::vector<std::uint8_t>(bits_needed));
    for (auto& b : bits) rng.fill_bits(b);
    Frame frame = build_frame(bits, arch_, wcfg_, fcfg_, order_, kPilotValue);
    if (zero_user >= 0) {
      for (SymbolVector& cell : frame.data[static_cast<std::size_t>(zero_user)]) {
        std::fill(cell.begin(), cell.end(), cplx{0.0, 0.0});
      }
    }

    // overhead slot: staggered pilots, then the channel estimate for this frame
    const auto obs = sound_pilots(weights, noise, rng, &acc);
    EffectiveChannel heff;
    if (opt_.genie_csi || force_genie) {
      heff = genie_channel(weights);
    } else {
      const std::vector<CVec> pilots(arch_.n_rf, pilot_data_);
      heff = estimate_channel(obs, pilots, opt_.per_subcarrier_csi);
    }
    std::vector<CMatrix> precoders;
    precoders.reserve(heff.per_subcarrier.size());
    for (const CMatrix& h : heff.per_subcarrier) precoders.push_back(build_digital_precoder(h));

    // data slots
    const std::size_t cells = fcfg_.data_symbols();
    const std::size_t sym_len = wcfg_.n_total + wcfg_.cp_len;
    std::vector<CVec> chain_time(arch_.n_rf, CVec(cells * sym_len));
    std::vector<CVec> user_vecs(n_users());
    for (std::size_t cell = 0; cell < cells; ++cell) {
      for (std::size_t u = 0; u < n_users(); ++u) user_vecs[u] = frame.data[u][cell];
      std::vector<CVec> chains = precode_across_users(precoders, user_vecs);
      for (std::size_t t = 0; t < arch_.n_rf; ++t) {
        const CVec time = chain_symbol_time(chains[t]);
        std::copy(time.begin(), time.end(),
                  chain_time[t].begin() + static_cast<std::ptrdiff_t>(cell * sym_len));
      }
    }
    const std::vector<CVec> ant = antennas_from_chains(chain_time, weights, &acc);
    const std::vector<CVec> rx = transmit(ant, ch_, noise, rng);

    // receivers: project, slice, score
    for (std::size_t u = 0; u < n_users(); ++u) {
      for (std::size_t cell = 0; cell < cells; ++cell) {
        const CVec r = rx_symbol_data(rx[u], cell);
        const CVec ref = extract_data_subcarriers(frame.data[u][cell], wcfg_);
        acc.add_symbols(u, r, ref);
        if (static_cast<int>(u) == zero_user) continue;
        const std::vector<std::uint8_t> rb = qam_demap(r, order_);
        const std::size_t off = cell * wcfg_.n_data * bps;
        acc.add_bits(u, rb, std::span<const std::uint8_t>(bits[u].data() + off, rb.size()));
      }
    }
    return acc;
  }

  // Noiseless genie probe of the received data-cell power, the reference the
  // SNR definition divides against. The probe payload is drawn from a seed
  // that depends only on the constellation so every architecture and sweep
  // point measures against the same reference symbols.
  std::vector<double> reference_power() const {
    Rng rng(mix_seed(kRefTag, order_));
    const NoiseSpec off = NoiseSpec::off(n_users());
    const MetricsAccumulator acc =
        run_frame(rng, weights_for(default_patterns()), off, -1, /*force_genie=*/true);
    std::vector<double> p(n_users());
    for (std::size_t u = 0; u < n_users(); ++u) {
      p[u] = acc.rx2[u] / static_cast<double>(acc.symbols[u]);
    }
    return p;
  }

 private:
  // waveform pre-equalization on the data block, then modulate + cyclic prefix
  CVec chain_symbol_time(const CVec& freq) const {
    if (!wp_) return add_cyclic_prefix(modulate(mod_, freq), wcfg_.cp_len);
    CVec pre = freq;
    const std::size_t off = guard_offset(wcfg_);
    const std::span<const cplx> block(freq.data() + off, wcfg_.n_data);
    const CVec eq = wp_->apply(block);
    std::copy(eq.begin(), eq.end(), pre.begin() + static_cast<std::ptrdiff_t>(off));
    return add_cyclic_prefix(modulate(mod_, pre), wcfg_.cp_len);
  }

  // strip CP, project, keep the data block, for the s-th symbol in the stream
  CVec rx_symbol_data(const CVec& stream, std::size_t s) const {
    const std::size_t sym_len = wcfg_.n_total + wcfg_.cp_len;
    const std::span<const cplx> seg(stream.data() + s * sym_len, sym_len);
    const CVec no_cp = remove_cyclic_prefix(seg, wcfg_.cp_len);
    return extract_data_subcarriers(demodulate(mod_, no_cp), wcfg_);
  }

  // per-position mix of the user vectors into chain vectors; guards are zero
  // so the per-sub-carrier precoders only need to exist on data positions
  std::vector<CVec> precode_across_users(const std::vector<CMatrix>& d,
                                         const std::vector<CVec>& users) const {
    if (d.size() == 1) return apply_digital_precoding(d.front(), users);
    const std::size_t off = guard_offset(wcfg_);
    std::vector<CVec> out(arch_.n_rf, CVec(wcfg_.n_total, cplx{0.0, 0.0}));
    for (std::size_t k = 0; k < wcfg_.n_data; ++k) {
      const CMatrix& dk = d[k];
      for (std::size_t t = 0; t < arch_.n_rf; ++t) {
        cplx acc{0.0, 0.0};
        for (std::size_t u = 0; u < n_users(); ++u) acc += dk.at(t, u) * users[u][off + k];
        out[t][off + k] = acc;
      }
    }
    return out;
  }

  // The genie view of the low-dimension channel: the literal weighted sum per
  // chain, scaled by the same splitter division the transmit path applies.
  EffectiveChannel genie_channel(const std::vector<AnalogWeights>& weights) const {
    EffectiveChannel he = effective_channel(ch_, weights);
    const double split = splitter_scale();
    for (CMatrix& m : he.per_subcarrier)
      for (std::size_t u = 0; u < m.rows(); ++u)
        for (std::size_t t = 0; t < m.cols(); ++t) m.at(u, t) *= split;
    return he;
  }

  // A passive splitter divides one chain's power across its branches; the
  // phase shifters behind it are phase-only. Fully digital chains (one
  // antenna each) pass through unchanged.
  double splitter_scale() const {
    return 1.0 / std::sqrt(static_cast<double>(arch_.antennas_per_chain()));
  }

  // scale chain streams onto their antennas through the splitter and the
  // phase weights
  std::vector<CVec> antennas_from_chains(const std::vector<CVec>& chain_time,
                                         const std::vector<AnalogWeights>& weights,
                                         MetricsAccumulator* acc) const {
    const std::size_t apc = arch_.antennas_per_chain();
    if (weights.size() != arch_.n_rf) throw ShapeError("link: one weight set per chain required");
    const std::size_t n_samples = chain_time.front().size();
    const double split = splitter_scale();
    std::vector<CVec> ant(arch_.n_tx, CVec(n_samples, cplx{0.0, 0.0}));
    for (std::size_t t = 0; t < arch_.n_rf; ++t) {
      if (weights[t].size() != apc) throw ShapeError("link: weight width mismatch");
      for (std::size_t i = 0; i < apc; ++i) {
        kernels::caxpy(split * weights[t][i], chain_time[t].data(), ant[t * apc + i].data(),
                       n_samples);
      }
    }
    if (acc != nullptr) {
      double p = 0.0;
      for (const CVec& a : ant) p += kernels::sum_abs2(a.data(), a.size());
      acc->tx_power_sum += p;
      acc->tx_samples += n_samples;
    }
    return ant;
  }

  ArchitectureConfig arch_;
  WaveformConfig wcfg_;
  unsigned order_;
  LinkOptions opt_;
  FrameConfig fcfg_;
  ModulationMatrix mod_;
  std::optional<CMatrix> wp_;
  Geometry geom_;
  FullChannel ch_;
  CVec pilot_data_;
  SymbolVector pilot_full_;
  CVec pilot_tx_time_;
};

NoiseSpec noise_for(const LinkOptions& opt, double snr_db, const std::vector<double>& ref_power) {
  if (!opt.noise_enabled) return NoiseSpec::off(ref_power.size());
  NoiseSpec n;
  n.enabled = true;
  for (double p : ref_power) n.sigma2_per_user.push_back(awgn_sigma2(snr_db, p));
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// point / link runners
// ---------------------------------------------------------------------------

PointResult run_point(const ArchitectureConfig& arch, const WaveformConfig& wcfg, unsigned order,
                      double snr_db, std::size_t n_frames, std::uint64_t seed,
                      const LinkOptions& options, std::size_t n_threads) {
  if (n_frames == 0) throw ConfigError("run_point: need at least one frame");
  const LinkSession session(arch, wcfg, order, options, mix_seed(seed, kChannelTag));

  PointResult result;
  result.reference_power = session.reference_power();
  const NoiseSpec noise = noise_for(options, snr_db, result.reference_power);

  std::vector<AnalogWeights> weights = session.unity_weights();
  if (arch.is_hybrid()) {
    Rng sweep_rng(mix_seed(seed, kSweepTag));
    result.selected_patterns = session.select_beams(noise, sweep_rng);
    weights = session.weights_for(result.selected_patterns);
  }

  std::vector<MetricsAccumulator> per_frame(n_frames, MetricsAccumulator(session.n_users()));
  const std::uint64_t frame_base = mix_seed(seed, kFrameTag);
  auto run_one = [&](std::size_t f) {
    Rng rng(mix_seed(frame_base, f));
    per_frame[f] = session.run_frame(rng, weights, noise);
  };

  const std::size_t workers = std::min(n_threads > 0 ? n_threads : 1, n_frames);
  if (workers <= 1) {
    for (std::size_t f = 0; f < n_frames; ++f) run_one(f);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t f = next.fetch_add(1);
          if (f >= n_frames) return;
          try {
            run_one(f);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  MetricsAccumulator total(session.n_users());
  for (const MetricsAccumulator& a : per_frame) total.merge(a);
  result.report = total.finalize(arch, wcfg, order, snr_db, seed, n_frames);
  return result;
}

MetricsReport run_link(const ArchitectureConfig& arch, const WaveformConfig& wcfg, unsigned order,
                       double snr_db, std::uint64_t seed, const LinkOptions& options) {
  return run_point(arch, wcfg, order, snr_db, 1, seed, options).report;
}

double measure_leakage(const ArchitectureConfig& arch, const WaveformConfig& wcfg, unsigned order,
                       std::uint64_t seed, std::size_t active_user, const LinkOptions& options) {
  LinkOptions opt = options;
  opt.noise_enabled = false;
  const LinkSession session(arch, wcfg, order, opt, mix_seed(seed, kChannelTag));
  if (active_user >= session.n_users()) throw ConfigError("measure_leakage: no such user");
  const NoiseSpec off = NoiseSpec::off(session.n_users());

  double worst = 0.0;
  for (std::size_t silenced = 0; silenced < session.n_users(); ++silenced) {
    if (silenced == active_user) continue;
    Rng rng(mix_seed(seed, kFrameTag));
    std::vector<AnalogWeights> weights = session.unity_weights();
    if (arch.is_hybrid()) {
      Rng sweep_rng(mix_seed(seed, kSweepTag));
      weights = session.weights_for(session.select_beams(off, sweep_rng));
    }
    const MetricsAccumulator acc =
        session.run_frame(rng, weights, off, static_cast<int>(silenced));
    const double p_active = acc.rx2[active_user] / static_cast<double>(acc.symbols[active_user]);
    const double p_leak = acc.rx2[silenced] / static_cast<double>(acc.symbols[silenced]);
    if (p_active <= 0.0) throw NumericError("measure_leakage: active user received nothing");
    worst = std::max(worst, p_leak / p_active);
  }
  return worst;
}

std::vector<int> select_beams_only(const ArchitectureConfig& arch, const WaveformConfig& wcfg,
                                   double snr_db, std::uint64_t seed, const LinkOptions& options) {
  const LinkSession session(arch, wcfg, /*order=*/4, options, mix_seed(seed, kChannelTag));
  const std::vector<double> ref = session.reference_power();
  const NoiseSpec noise = noise_for(options, snr_db, ref);
  Rng sweep_rng(mix_seed(seed, kSweepTag));
  return session.select_beams(noise, sweep_rng);
}

// ---------------------------------------------------------------------------
// sweep configuration
// ---------------------------------------------------------------------------

void SweepSpec::validate() const {
  if (frames == 0) throw ConfigError("sweep: frames must be >= 1");
  if (snr_db.empty()) throw ConfigError("sweep: snr list is empty");
  if (archs.empty()) throw ConfigError("sweep: no architectures");
  if (waveforms.empty()) throw ConfigError("sweep: no waveforms");
  if (orders.empty()) throw ConfigError("sweep: no constellation orders");
  for (const std::string& w : waveforms) {
    if (w != "ofdm" && w != "sefdm") throw ConfigError("sweep: unknown waveform '" + w + "'");
  }
  for (unsigned o : orders) {
    if (o != 4 && o != 16) throw ConfigError("sweep: unsupported order " + std::to_string(o));
  }
  if (!(alpha > 0.0) || alpha > 1.0) throw ConfigError("sweep: alpha out of range");
  profile.validate();
}

WaveformConfig SweepSpec::waveform_for(const std::string& name) const {
  WaveformConfig cfg = profile;
  cfg.alpha = (name == "ofdm") ? 1.0 : alpha;
  cfg.validate();
  return cfg;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "0" || v == "false" || v == "off") return false;
  if (v == "1" || v == "true" || v == "on") return true;
  throw ConfigError("config: bad boolean value for " + key + ": '" + v + "'");
}

}  // namespace

SweepSpec parse_sweep_config(const std::string& text) {
  SweepSpec spec;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config: expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("config: empty value for " + key);

    if (key == "archs") {
      spec.archs.clear();
      for (const std::string& a : split_list(value))
        spec.archs.push_back(ArchitectureConfig::kind_from_string(a));
    } else if (key == "waveforms") {
      spec.waveforms = split_list(value);
    } else if (key == "orders") {
      spec.orders.clear();
      for (const std::string& o : split_list(value))
        spec.orders.push_back(static_cast<unsigned>(parse_u64(key, o)));
    } else if (key == "snr_db") {
      spec.snr_db.clear();
      for (const std::string& s : split_list(value)) spec.snr_db.push_back(parse_double(key, s));
    } else if (key == "frames") {
      spec.frames = parse_u64(key, value);
    } else if (key == "seed") {
      spec.master_seed = parse_u64(key, value);
    } else if (key == "alpha") {
      spec.alpha = parse_double(key, value);
    } else if (key == "n_total") {
      spec.profile.n_total = parse_u64(key, value);
    } else if (key == "n_data") {
      spec.profile.n_data = parse_u64(key, value);
    } else if (key == "cp_len") {
      spec.profile.cp_len = parse_u64(key, value);
    } else if (key == "fs_hz") {
      spec.profile.fs_hz = parse_double(key, value);
    } else if (key == "subcarrier_bw_hz") {
      spec.profile.subcarrier_bw_hz = parse_double(key, value);
    } else if (key == "symbols_per_slot") {
      spec.options.symbols_per_slot = parse_u64(key, value);
    } else if (key == "carrier_hz") {
      spec.options.geometry.carrier_hz = parse_double(key, value);
    } else if (key == "range_m") {
      spec.options.geometry.range_m = parse_double(key, value);
    } else if (key == "user_sep_m") {
      spec.options.geometry.user_sep_m = parse_double(key, value);
    } else if (key == "user_angles_deg") {
      spec.options.geometry.user_angles_deg.clear();
      for (const std::string& a : split_list(value))
        spec.options.geometry.user_angles_deg.push_back(parse_double(key, a));
    } else if (key == "rician_k_db") {
      spec.options.rician_k_db = parse_double(key, value);
    } else if (key == "per_subcarrier_csi") {
      spec.options.per_subcarrier_csi = parse_bool(key, value);
    } else if (key == "genie_csi") {
      spec.options.genie_csi = parse_bool(key, value);
    } else if (key == "noise") {
      spec.options.noise_enabled = parse_bool(key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

SweepSpec load_sweep_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("config: cannot open " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_sweep_config(buf.str());
}

std::uint64_t point_seed(std::uint64_t master, ArchKind arch, const std::string& waveform,
                         unsigned order, double snr_db, double alpha) {
  std::uint64_t s = mix_seed(master, static_cast<std::uint64_t>(arch) + 11);
  s = mix_seed(s, waveform == "ofdm" ? 1u : 2u);
  s = mix_seed(s, order);
  s = mix_seed(s, std::bit_cast<std::uint64_t>(snr_db));
  s = mix_seed(s, std::bit_cast<std::uint64_t>(alpha));
  return s;
}

// ---------------------------------------------------------------------------
// sweep execution and plot data
// ---------------------------------------------------------------------------

namespace {

std::string csv_row(const MetricsReport& r, std::size_t user, std::uint64_t master_seed) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%s,%.10g,%u,%.10g,%zu,%.6f,%.10g,%.10g,%.10g,%zu,%llu\n",
                r.arch.c_str(), r.waveform.c_str(), r.alpha, r.order, r.snr_db, user,
                r.evm_db[user], r.ber[user], r.se_e[user], r.eta[user], r.frames,
                static_cast<unsigned long long>(master_seed));
  return buf;
}

}  // namespace

void run_sweep(const SweepSpec& spec, const std::string& out_csv_path, std::size_t n_threads,
               std::ostream* progress) {
  spec.validate();
  std::ofstream os(out_csv_path);
  if (!os) throw IoError("run_sweep: cannot open " + out_csv_path);
  os << "arch,waveform,alpha,order,snr_db,user,evm_db,ber,se_e,eta,frames,seed\n";
  try {
    for (ArchKind kind : spec.archs) {
      const ArchitectureConfig arch = ArchitectureConfig::make(kind);
      for (const std::string& wf : spec.waveforms) {
        const WaveformConfig wcfg = spec.waveform_for(wf);
        for (unsigned order : spec.orders) {
          for (double snr : spec.snr_db) {
            const std::uint64_t seed =
                point_seed(spec.master_seed, kind, wf, order, snr, wcfg.alpha);
            const PointResult res =
                run_point(arch, wcfg, order, snr, spec.frames, seed, spec.options, n_threads);
            for (std::size_t u = 0; u < res.report.ber.size(); ++u) {
              os << csv_row(res.report, u, spec.master_seed);
            }
            os.flush();
            if (!os) throw IoError("run_sweep: write failed for " + out_csv_path);
            if (progress != nullptr) {
              *progress << arch.name() << " " << wf << " qam" << order << " snr=" << snr
                        << " done\n";
            }
          }
        }
      }
    }
  } catch (const std::exception& e) {
    os << "# TRUNCATED: " << e.what() << "\n";
    os.flush();
    throw;
  }
}

std::vector<std::string> emit_plot_data(const std::string& csv_path, const std::string& metric,
                                        const std::string& out_dir) {
  std::size_t column = 0;
  if (metric == "evm") column = 6;
  else if (metric == "ber") column = 7;
  else if (metric == "se") column = 8;
  else if (metric == "ee") column = 9;
  else throw ConfigError("plot-data: unknown metric '" + metric + "' (use evm|ber|se|ee)");

  std::ifstream is(csv_path);
  if (!is) throw IoError("plot-data: cannot open " + csv_path);

  // curve key -> snr -> (sum over users, count)
  std::map<std::string, std::map<double, std::pair<double, std::size_t>>> curves;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() < 12) throw IoError("plot-data: malformed row: " + line);
    const std::string key = f[0] + "_" + f[1] + "_qam" + f[3];
    const double snr = parse_double("snr_db", f[4]);
    const double v = parse_double(metric, f[column]);
    auto& cell = curves[key][snr];
    cell.first += v;
    cell.second += 1;
  }

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [key, points] : curves) {
    const std::string path = out_dir + "/" + metric + "_" + key + ".dat";
    std::ofstream os(path);
    if (!os) throw IoError("plot-data: cannot open " + path);
    char buf[80];
    for (const auto& [snr, sum_count] : points) {
      std::snprintf(buf, sizeof(buf), "%.10g %.10g\n", snr,
                    sum_count.first / static_cast<double>(sum_count.second));
      os << buf;
    }
    written.push_back(path);
  }
  return written;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

bool run_selftest(std::ostream& out) {
  struct Check {
    const char* name;
    std::function<void()> fn;
  };
  auto expect = [](bool ok, const std::string& what) {
    if (!ok) throw Error("check failed: " + what);
  };

  const std::vector<Check> checks = {
      {"kernel backends agree",
       [&] {
         Rng rng(7);
         const std::size_t rows = 33, cols = 47;
         CVec a(rows * cols), x(cols), y_s(rows), y_v(rows);
         for (auto& v : a) v = {rng.normal(), rng.normal()};
         for (auto& v : x) v = {rng.normal(), rng.normal()};
         const auto prev = kernels::active_backend();
         kernels::set_backend(kernels::Backend::scalar);
         kernels::cgemv(a.data(), rows, cols, x.data(), y_s.data());
         kernels::set_backend(kernels::best_backend());
         kernels::cgemv(a.data(), rows, cols, x.data(), y_v.data());
         kernels::set_backend(prev);
         for (std::size_t r = 0; r < rows; ++r) {
           expect(std::abs(y_s[r] - y_v[r]) < 1e-10, "cgemv backend mismatch");
         }
       }},
      {"projection equals matched-filter product",
       [&] {
         WaveformConfig cfg = WaveformConfig::narrowband_profile(0.9);
         cfg.n_total = 32;
         cfg.n_data = 8;
         const ModulationMatrix f(cfg);
         const CorrelationMatrix c(cfg);
         const CMatrix product = f.adj() * f.fwd();
         expect(CMatrix::max_abs_diff(product, c.mat()) < 1e-10, "F^H F != C");
       }},
      {"closed form matches direct sub-carrier sum",
       [&] {
         WaveformConfig cfg = WaveformConfig::narrowband_profile(0.8);
         cfg.n_total = 8;
         cfg.n_data = 4;
         const CorrelationMatrix c(cfg);
         const double n = 8.0;
         for (std::size_t m = 0; m < 8; ++m) {
           for (std::size_t nn = 0; nn < 8; ++nn) {
             cplx acc{0.0, 0.0};
             for (std::size_t k = 0; k < 8; ++k) {
               const double ph = 2.0 * 3.14159265358979323846 * 0.8 *
                                 (static_cast<double>(nn) - static_cast<double>(m)) *
                                 static_cast<double>(k) / n;
               acc += std::polar(1.0 / n, ph);
             }
             expect(std::abs(acc - c.mat().at(m, nn)) < 1e-10, "correlation closed form");
           }
         }
       }},
      {"orthogonal configuration round trip",
       [&] {
         const WaveformConfig cfg = WaveformConfig::narrowband_profile(1.0);
         const ModulationMatrix f(cfg);
         Rng rng(3);
         CVec s(cfg.n_total);
         for (auto& v : s) v = {rng.normal(), rng.normal()};
         const CVec r = demodulate(f, modulate(f, s));
         for (std::size_t i = 0; i < s.size(); ++i) {
           expect(std::abs(r[i] - s[i]) < 1e-10, "round trip");
         }
       }},
      {"pre-equalizer inverts the correlation matrix",
       [&] {
         WaveformConfig cfg = WaveformConfig::narrowband_profile(0.9);
         cfg.n_total = 12;
         cfg.n_data = 6;
         const CorrelationMatrix c(cfg);
         const CMatrix w = build_waveform_precoder(c);
         expect(CMatrix::max_abs_diff(c.mat() * w, CMatrix::identity(12)) < 1e-8,
                "C W != I");
       }},
      {"codebook table is consistent with the offset formula",
       [&] {
         const Codebook& cb = Codebook::builtin();
         for (const BeamPattern& p : cb.patterns) {
           const double geo = relative_phase_offset_deg(std::abs(p.steer_deg), 0.5);
           expect(std::abs(geo - p.rel_phase_deg) <= 1.0, "offset deviates by more than 1 deg");
         }
       }},
      {"noiseless hybrid link is exact",
       [&] {
         LinkOptions opt;
         opt.noise_enabled = false;
         const MetricsReport r = run_link(ArchitectureConfig::make(ArchKind::HP),
                                          WaveformConfig::narrowband_profile(0.9), 16, 30.0, 5,
                                          opt);
         for (double b : r.ber) expect(b == 0.0, "noiseless BER != 0");
         const double leak = measure_leakage(ArchitectureConfig::make(ArchKind::HP),
                                             WaveformConfig::narrowband_profile(0.9), 16, 5, 0,
                                             opt);
         expect(leak < 1e-8, "cross-user leakage too high");
       }},
      {"repeated runs are identical",
       [&] {
         LinkOptions opt;
         const MetricsReport a = run_link(ArchitectureConfig::make(ArchKind::FDP_II),
                                          WaveformConfig::narrowband_profile(1.0), 4, 15.0, 42,
                                          opt);
         const MetricsReport b = run_link(ArchitectureConfig::make(ArchKind::FDP_II),
                                          WaveformConfig::narrowband_profile(1.0), 4, 15.0, 42,
                                          opt);
         expect(a.evm_db == b.evm_db && a.ber == b.ber, "reports differ across runs");
       }},
  };

  bool all_ok = true;
  for (const Check& c : checks) {
    try {
      c.fn();
      out << "[ok]   " << c.name << "\n";
    } catch (const std::exception& e) {
      out << "[FAIL] " << c.name << ": " << e.what() << "\n";
      all_ok = false;
    }
  }
  return all_ok;
}

}  // namespace sefdm
