// SPDX-License-Identifier: Apache-2.0
//
// Command line front end for the multiuser downlink simulator.
//
//   sefdm run --config cfg.txt --out results.csv [--threads N] [--dump-iq f.iq]
//   sefdm plot-data --csv results.csv --metric ber --out-dir plots/
//   sefdm codebook [--out codebook.csv]
//   sefdm selftest
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "sefdm/errors.hpp"
#include "sefdm/harness.hpp"
#include "sefdm/kernels.hpp"

namespace {

int error_code(const std::exception& e) {
  if (dynamic_cast<const sefdm::ConfigError*>(&e)) return 2;
  if (dynamic_cast<const sefdm::ShapeError*>(&e)) return 3;
  if (dynamic_cast<const sefdm::NumericError*>(&e)) return 4;
  if (dynamic_cast<const sefdm::IoError*>(&e)) return 5;
  return 1;
}

const char* error_tag(const std::exception& e) {
  if (dynamic_cast<const sefdm::ConfigError*>(&e)) return "config";
  if (dynamic_cast<const sefdm::ShapeError*>(&e)) return "shape";
  if (dynamic_cast<const sefdm::NumericError*>(&e)) return "numeric";
  if (dynamic_cast<const sefdm::IoError*>(&e)) return "io";
  return "runtime";
}

void dump_first_frame(const sefdm::SweepSpec& spec, const std::string& path) {
  // representative per-chain baseband samples (pilot symbol followed by one
  // slot of modulated data cells, before any precoding) for waveform
  // inspection
  const sefdm::ArchitectureConfig arch = sefdm::ArchitectureConfig::make(spec.archs.front());
  const sefdm::WaveformConfig wcfg = spec.waveform_for(spec.waveforms.front());
  sefdm::Rng rng(spec.master_seed);
  const std::size_t bits_needed = (spec.options.symbols_per_slot * 19) * wcfg.n_data *
                                  sefdm::qam_bits_per_symbol(spec.orders.front());
  std::vector<std::vector<std::uint8_t>> bits(arch.n_users,
                                              std::vector<std::uint8_t>(bits_needed));
  for (auto& b : bits) rng.fill_bits(b);
  sefdm::FrameConfig fcfg;
  fcfg.pilot_slots_needed = arch.n_rf;
  fcfg.symbols_per_slot = spec.options.symbols_per_slot;
  const sefdm::Frame frame = sefdm::build_frame(bits, arch, wcfg, fcfg, spec.orders.front(),
                                                sefdm::cplx{0.7071067811865476, 0.7071067811865476});
  const sefdm::ModulationMatrix mod(wcfg);
  std::vector<sefdm::CVec> chains(arch.n_rf);
  for (std::size_t t = 0; t < arch.n_rf; ++t) {
    sefdm::CVec time = sefdm::add_cyclic_prefix(sefdm::modulate(mod, frame.pilots[t]), wcfg.cp_len);
    chains[t] = time;
    for (std::size_t cell = 0; cell < frame.cfg.symbols_per_slot; ++cell) {
      const sefdm::CVec d =
          sefdm::add_cyclic_prefix(sefdm::modulate(mod, frame.data[t % arch.n_users][cell]),
                                   wcfg.cp_len);
      chains[t].insert(chains[t].end(), d.begin(), d.end());
    }
  }
  sefdm::dump_frame_iq(path, chains);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiuser MIMO downlink simulator for compressed multicarrier signals"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a sweep from a config file and write CSV results");
  std::string config_path, out_path = "results.csv", dump_path;
  std::size_t threads = 1;
  run->add_option("--config", config_path, "key=value sweep configuration")->required();
  run->add_option("--out", out_path, "output CSV path");
  run->add_option("--threads", threads, "worker threads per sweep point");
  run->add_option("--dump-iq", dump_path, "also dump one frame of I/Q samples to this path");

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "split a results CSV into per-curve data files");
  std::string csv_path, metric = "ber", out_dir = "plots";
  plot->add_option("--csv", csv_path, "sweep results CSV")->required();
  plot->add_option("--metric", metric, "evm|ber|se|ee");
  plot->add_option("--out-dir", out_dir, "directory for the .dat files");

  // codebook
  auto* cb = app.add_subcommand("codebook", "dump the analogue beam codebook as CSV");
  std::string cb_out;
  cb->add_option("--out", cb_out, "write to file instead of stdout");

  // selftest
  app.add_subcommand("selftest", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const sefdm::SweepSpec spec = sefdm::load_sweep_config(config_path);
      if (!dump_path.empty()) dump_first_frame(spec, dump_path);
      sefdm::run_sweep(spec, out_path, threads, &std::cerr);
      std::cout << "wrote " << out_path << " (kernels: "
                << sefdm::kernels::backend_name(sefdm::kernels::active_backend()) << ")\n";
    } else if (plot->parsed()) {
      const std::vector<std::string> files = sefdm::emit_plot_data(csv_path, metric, out_dir);
      for (const std::string& f : files) std::cout << f << "\n";
    } else if (cb->parsed()) {
      const std::string csv = sefdm::Codebook::builtin().to_csv();
      if (cb_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream os(cb_out);
        if (!os) throw sefdm::IoError("codebook: cannot open " + cb_out);
        os << csv;
      }
    } else {  // selftest
      if (!sefdm::run_selftest(std::cout)) {
        std::cerr << "error: selftest: one or more checks failed\n";
        return 6;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << error_tag(e) << ": " << e.what() << "\n";
    return error_code(e);
  }
  return 0;
}
