// SPDX-License-Identifier: Apache-2.0
#include "sefdm/framing.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "sefdm/errors.hpp"

namespace sefdm {

static_assert(std::endian::native == std::endian::little,
              "frame dumps assume a little-endian host");

void FrameConfig::validate() const {
  if (slots_per_frame == 0 || symbols_per_slot == 0)
    throw ConfigError("frame: slot layout must be non-empty");
  if (overhead_slots >= slots_per_frame)
    throw ConfigError("frame: overhead consumes the whole frame");
  if (pilot_slots_needed > overhead_slots * symbols_per_slot)
    throw ConfigError("frame: pilots do not fit into the overhead region");
}

Frame build_frame(const std::vector<std::vector<std::uint8_t>>& bits_per_user,
                  const ArchitectureConfig& arch, const WaveformConfig& wcfg,
                  const FrameConfig& fcfg, unsigned order, cplx pilot_value) {
  arch.validate();
  wcfg.validate();
  fcfg.validate();
  if (fcfg.pilot_slots_needed != arch.n_rf)
    throw ConfigError("frame: pilot symbol count must equal the RF chain count");
  if (bits_per_user.size() != arch.n_users)
    throw ShapeError("frame: expected one bit stream per user");

  const std::size_t bits_needed =
      fcfg.data_symbols() * wcfg.n_data * qam_bits_per_symbol(order);
  for (std::size_t u = 0; u < bits_per_user.size(); ++u) {
    if (bits_per_user[u].size() != bits_needed)
      throw ConfigError("frame: user " + std::to_string(u) + " supplies " +
                        std::to_string(bits_per_user[u].size()) + " bits, frame needs exactly " +
                        std::to_string(bits_needed));
  }

  Frame frame;
  frame.cfg = fcfg;
  frame.n_chains = arch.n_rf;
  frame.n_users = arch.n_users;
  frame.order = order;

  CVec pilot_data(wcfg.n_data, pilot_value);
  frame.pilots.assign(frame.n_chains, map_guard_bands(pilot_data, wcfg));

  frame.data.resize(frame.n_users);
  for (std::size_t u = 0; u < frame.n_users; ++u) {
    const CVec symbols = qam_map(bits_per_user[u], order);
    frame.data[u].reserve(fcfg.data_symbols());
    for (std::size_t cell = 0; cell < fcfg.data_symbols(); ++cell) {
      const std::span<const cplx> chunk(symbols.data() + cell * wcfg.n_data, wcfg.n_data);
      frame.data[u].push_back(map_guard_bands(chunk, wcfg));
    }
  }
  return frame;
}

std::vector<std::vector<std::uint8_t>> parse_frame(const Frame& frame, const WaveformConfig& wcfg) {
  std::vector<std::vector<std::uint8_t>> bits(frame.n_users);
  for (std::size_t u = 0; u < frame.n_users; ++u) {
    CVec symbols;
    symbols.reserve(frame.data[u].size() * wcfg.n_data);
    for (const SymbolVector& cell : frame.data[u]) {
      const CVec d = extract_data_subcarriers(cell, wcfg);
      symbols.insert(symbols.end(), d.begin(), d.end());
    }
    bits[u] = qam_demap(symbols, frame.order);
  }
  return bits;
}

CVec add_cyclic_prefix(std::span<const cplx> x, std::size_t cp_len) {
  if (cp_len > x.size()) throw ConfigError("cyclic prefix longer than the symbol");
  CVec out;
  out.reserve(x.size() + cp_len);
  out.insert(out.end(), x.end() - static_cast<std::ptrdiff_t>(cp_len), x.end());
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

CVec remove_cyclic_prefix(std::span<const cplx> x, std::size_t cp_len) {
  if (cp_len > x.size()) throw ConfigError("cyclic prefix longer than the block");
  return CVec(x.begin() + static_cast<std::ptrdiff_t>(cp_len), x.end());
}

std::size_t guard_offset(const WaveformConfig& wcfg) { return (wcfg.n_total - wcfg.n_data) / 2; }

SymbolVector map_guard_bands(std::span<const cplx> data_symbols, const WaveformConfig& wcfg) {
  if (data_symbols.size() != wcfg.n_data)
    throw ShapeError("map_guard_bands: expected exactly n_data symbols");
  SymbolVector out(wcfg.n_total, cplx{0.0, 0.0});
  const std::size_t off = guard_offset(wcfg);
  for (std::size_t i = 0; i < wcfg.n_data; ++i) out[off + i] = data_symbols[i];
  return out;
}

CVec extract_data_subcarriers(std::span<const cplx> full, const WaveformConfig& wcfg) {
  if (full.size() != wcfg.n_total)
    throw ShapeError("extract_data_subcarriers: expected a full symbol vector");
  const std::size_t off = guard_offset(wcfg);
  return CVec(full.begin() + static_cast<std::ptrdiff_t>(off),
              full.begin() + static_cast<std::ptrdiff_t>(off + wcfg.n_data));
}

namespace {
void put_u32(std::ofstream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t get_u32(std::ifstream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
}  // namespace

void dump_frame_iq(const std::string& path, const std::vector<CVec>& per_chain_time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("dump_frame_iq: cannot open " + path);
  const std::size_t n_samples = per_chain_time.empty() ? 0 : per_chain_time.front().size();
  for (const CVec& c : per_chain_time) {
    if (c.size() != n_samples) throw ShapeError("dump_frame_iq: chains have different lengths");
  }
  os.write("SEIQ", 4);
  put_u32(os, 1u);
  put_u32(os, static_cast<std::uint32_t>(per_chain_time.size()));
  put_u32(os, static_cast<std::uint32_t>(n_samples));
  for (const CVec& chain : per_chain_time) {
    for (const cplx& s : chain) {
      const float iq[2] = {static_cast<float>(s.real()), static_cast<float>(s.imag())};
      os.write(reinterpret_cast<const char*>(iq), sizeof(iq));
    }
  }
  if (!os) throw IoError("dump_frame_iq: write failed for " + path);
}

std::vector<CVec> load_frame_iq(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_frame_iq: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "SEIQ", 4) != 0) throw IoError("load_frame_iq: bad magic");
  if (get_u32(is) != 1u) throw IoError("load_frame_iq: unsupported version");
  const std::uint32_t n_chains = get_u32(is);
  const std::uint32_t n_samples = get_u32(is);
  std::vector<CVec> out(n_chains, CVec(n_samples));
  for (auto& chain : out) {
    for (auto& s : chain) {
      float iq[2];
      is.read(reinterpret_cast<char*>(iq), sizeof(iq));
      s = {static_cast<double>(iq[0]), static_cast<double>(iq[1])};
    }
  }
  if (!is) throw IoError("load_frame_iq: truncated file");
  return out;
}

}  // namespace sefdm
