// rydberg_rx: spectra, pilot calibration and SER tables for the five-level
// Rydberg receiver.
//
// Exit codes: 0 ok, 1 unexpected, 2 usage, 3 config parse/validation,
// 4 numerical failure, 5 I/O.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rydberg/commands.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,
  kConfig = 3,
  kNumerical = 4,
  kIo = 5,
};

int exit_code_for(rydberg::ErrorKind kind) {
  using rydberg::ErrorKind;
  switch (kind) {
    case ErrorKind::usage: return kUsage;
    case ErrorKind::parse:
    case ErrorKind::validation:
    case ErrorKind::invalid_parameter: return kConfig;
    case ErrorKind::no_unique_steady_state:
    case ErrorKind::step_too_large:
    case ErrorKind::singularity:
    case ErrorKind::invalid_coherence:
    case ErrorKind::no_splitting:
    case ErrorKind::demodulation_infeasible: return kNumerical;
    case ErrorKind::io: return kIo;
  }
  return kUnexpected;
}

double parse_field_flag(const std::string& text) {
  try {
    return rydberg::units::parse_quantity(text, rydberg::units::Dimension::electric_field);
  } catch (const rydberg::Error& e) {
    rydberg::fail(rydberg::ErrorKind::usage, std::string("bad field '") + text + "': " + e.what());
  }
}

// Output is assembled in memory and written in one go so a failed run never
// leaves a half-written file behind.
void emit(const std::string& path, const std::string& text, bool append) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) rydberg::fail(rydberg::ErrorKind::io, "cannot write to stdout");
    return;
  }
  std::ofstream out(path, append ? std::ios::binary | std::ios::app
                                 : std::ios::binary | std::ios::trunc);
  if (!out) rydberg::fail(rydberg::ErrorKind::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) rydberg::fail(rydberg::ErrorKind::io, "write to '" + path + "' failed");
}

std::string symbol_path(const std::string& out, std::size_t k) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string();
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  return (p.parent_path() / (stem + ".symbol" + std::to_string(k) + ext)).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Five-level Rydberg receiver: spectra, calibration and symbol error rates"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string engine_name;
  std::string out_path = "-";
  unsigned threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario file (YAML)")->required();
    cmd->add_option("--seed", seed, "64-bit seed (overrides the config)");
    cmd->add_option("--engine", engine_name, "numeric | weakprobe | stark");
    cmd->add_option("--out", out_path, "output path, '-' for stdout");
    cmd->add_option("--threads", threads, "worker threads, 0 = hardware concurrency");
  };

  auto* spectrum = app.add_subcommand("spectrum", "probe transmission versus coupling detuning");
  add_common(spectrum);
  std::string rf_field, interference_field;
  bool all_symbols = false;
  spectrum->add_option("--rf-field", rf_field, "RF field override, e.g. '7 uV/cm'");
  spectrum->add_option("--interference-field", interference_field,
                       "interference field override, e.g. '1 V/m'");
  spectrum->add_flag("--all-symbols", all_symbols,
                     "one trace per PAM level, written to <out>.symbol<k>.csv");

  auto* calibrate = app.add_subcommand("calibrate", "locate the shifted readout extremum");
  add_common(calibrate);
  std::optional<std::size_t> pilots;
  calibrate->add_option("--pilots", pilots, "number of pilot searches (overrides the config)")
      ->check(CLI::PositiveNumber);

  auto* ser = app.add_subcommand("ser", "symbol error rate table rows");
  add_common(ser);
  std::uint64_t symbols = 10'000'000;
  std::string receiver_name = "both";
  bool append = false;
  ser->add_option("--symbols", symbols, "Monte Carlo symbols per Rydberg row")
      ->check(CLI::PositiveNumber);
  ser->add_option("--receiver", receiver_name, "rydberg | conventional | both");
  ser->add_flag("--append", append, "append to the output file instead of replacing it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    auto cfg = rydberg::parse_config(config_path);
    if (seed) cfg.seed = *seed;
    const auto engine = engine_name.empty() ? cfg.engine : rydberg::parse_engine(engine_name);

    std::ostringstream text;
    if (spectrum->parsed()) {
      rydberg::SpectrumOptions opt;
      opt.threads = threads;
      if (!interference_field.empty()) opt.interference_field = parse_field_flag(interference_field);
      if (all_symbols) {
        if (!rf_field.empty())
          rydberg::fail(rydberg::ErrorKind::usage, "--all-symbols and --rf-field are exclusive");
        if (out_path.empty() || out_path == "-")
          rydberg::fail(rydberg::ErrorKind::usage, "--all-symbols needs --out");
        for (std::size_t k = 0; k < cfg.link.m_levels(); ++k) {
          std::ostringstream one;
          opt.rf_field = cfg.link.field_levels[k];
          rydberg::cmd_spectrum(cfg, engine, one, opt);
          emit(symbol_path(out_path, k), one.str(), false);
        }
        return kOk;
      }
      if (!rf_field.empty()) opt.rf_field = parse_field_flag(rf_field);
      rydberg::cmd_spectrum(cfg, engine, text, opt);
      emit(out_path, text.str(), false);
    } else if (calibrate->parsed()) {
      rydberg::cmd_calibrate(cfg, engine, pilots.value_or(cfg.calibration.pilots), text, threads);
      emit(out_path, text.str(), false);
    } else if (ser->parsed()) {
      const auto receiver = rydberg::parse_receiver(receiver_name);
      rydberg::cmd_ser(cfg, receiver, engine, symbols, text, threads);
      emit(out_path, text.str(), append);
    }
    return kOk;
  } catch (const rydberg::Error& e) {
    std::cerr << "rydberg_rx: " << rydberg::to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "rydberg_rx: " << e.what() << "\n";
    return kUnexpected;
  }
}
