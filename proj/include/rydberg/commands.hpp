#pragma once

// The three CLI commands as library calls writing to a stream. Every output
// carries the config digest and the seed; none of it depends on thread count.

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rydberg/comms_link.hpp"
#include "rydberg/config.hpp"
#include "rydberg/error.hpp"
#include "rydberg/spectroscopy.hpp"
#include "rydberg/units.hpp"

namespace rydberg {

using Json = nlohmann::ordered_json;

struct SpectrumOptions {
  std::optional<double> rf_field;            ///< V/m, overrides the config
  std::optional<double> interference_field;  ///< V/m, overrides the config
  unsigned threads = 0;
};

inline SpectrumTrace cmd_spectrum(const ScenarioConfig& cfg, Engine engine, std::ostream& out,
                                  const SpectrumOptions& opt = {}) {
  LadderConfig ladder = cfg.ladder;
  if (opt.rf_field) ladder = ladder.with_rf_field(*opt.rf_field);
  if (opt.interference_field) ladder = ladder.with_interference_field(*opt.interference_field);
  const auto grid = cfg.spectrum.grid();
  if (grid.empty()) fail(ErrorKind::usage, "spectrum grid is empty");
  const auto trace = sweep_spectrum(ladder, grid, engine, opt.threads);

  out << "# command=spectrum\n";
  out << "# config_digest=" << config_digest(cfg) << "\n";
  out << "# seed=" << cfg.seed << "\n";
  out << "# engine=" << to_string(engine) << "\n";
  out << "# rf_field_v_m=" << units::format_number(ladder.fields.rf) << "\n";
  out << "# interference_field_v_m=" << units::format_number(ladder.fields.interference) << "\n";
  out << "delta_c_rad_s,transmission\n";
  for (const auto& s : trace.samples)
    out << units::format_number(s.delta_c) << "," << units::format_number(s.transmission) << "\n";
  return trace;
}

inline CalibrationReport calibrate_scenario(const ScenarioConfig& cfg, Engine engine,
                                            std::size_t pilots, unsigned threads = 0) {
  return run_pilot_calibration(cfg.ladder, cfg.link, cfg.calibration.search.grid(), pilots,
                               derive_seed(cfg.seed, "calibrate/pilots"),
                               cfg.calibration.jitter_sigma(), engine, threads);
}

inline Json cmd_calibrate(const ScenarioConfig& cfg, Engine engine, std::size_t pilots,
                          std::ostream& out, unsigned threads = 0) {
  const auto r = calibrate_scenario(cfg, engine, pilots, threads);
  Json j;
  j["command"] = "calibrate";
  j["engine"] = to_string(engine);
  j["pilots"] = r.pilots;
  j["jitter_sigma_rad_s"] = r.jitter_sigma;
  j["representative_field_v_m"] = r.representative_field;
  j["single_shot_delta_c_rad_s"] = r.single_shot;
  j["pilot_mean_delta_c_rad_s"] = r.pilot_mean;
  j["pilot_std_error_rad_s"] = r.pilot_std_error;
  j["analytic_delta_c_rad_s"] = r.analytic;
  j["relative_difference"] = r.relative_difference;
  j["seed"] = cfg.seed;
  j["config_digest"] = config_digest(cfg);
  out << j.dump() << "\n";
  return j;
}

enum class Receiver { rydberg, conventional, both };

inline Receiver parse_receiver(std::string_view name) {
  if (name == "rydberg") return Receiver::rydberg;
  if (name == "conventional") return Receiver::conventional;
  if (name == "both") return Receiver::both;
  fail(ErrorKind::usage, "unknown receiver '" + std::string(name) +
                             "' (expected rydberg, conventional or both)");
}

struct RydbergSerRow {
  double accuracy = 0.0;
  double readout_delta_c = 0.0;
  double min_separation_over_sigma = 0.0;
  RydbergReceiverModel model;
  SerEstimate estimate;
};

/// Smallest gap between adjacent levels over the larger of the two noise sigmas.
inline double min_separation_over_sigma(const RydbergReceiverModel& model) {
  const auto sig = model.transmission_sigmas();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < model.levels.size(); ++k) {
    const double gap = std::abs(model.levels[k + 1] - model.levels[k]);
    const double s = std::max(sig[k], sig[k + 1]);
    best = std::min(best, s > 0.0 ? gap / s : std::numeric_limits<double>::infinity());
  }
  return best;
}

/// One SER estimate per configured calibration accuracy.
inline std::vector<RydbergSerRow> rydberg_ser_table(const ScenarioConfig& cfg, Engine engine,
                                                    std::uint64_t n_symbols,
                                                    unsigned threads = 0) {
  const auto cal = calibrate_scenario(cfg, engine, cfg.calibration.pilots, threads);
  const double true_shift = cal.pilot_mean;
  std::vector<double> reference;
  if (cfg.threshold_policy == ThresholdPolicy::reference_extremum)
    reference = reference_levels(cfg.ladder, cfg.link, true_shift, engine, threads);

  std::vector<RydbergSerRow> rows;
  for (double acc : cfg.calibration_accuracies) {
    RydbergSerRow row;
    row.accuracy = acc;
    row.readout_delta_c = calibrated_readout_detuning(true_shift, acc);
    row.model = prepare_rydberg_receiver(cfg.ladder, cfg.noise, cfg.link, row.readout_delta_c,
                                         engine, reference.empty() ? nullptr : &reference, threads);
    row.min_separation_over_sigma = min_separation_over_sigma(row.model);
    const auto seed = derive_seed(cfg.seed, "ser/rydberg/" + units::format_number(acc));
    row.estimate = estimate_ser_rydberg(row.model, n_symbols, seed, threads);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct ConventionalSerRow {
  double attenuation = 0.0;
  double symbol_energy = 0.0;
  double noise_energy = 0.0;
  double ser = 0.0;
};

inline std::vector<ConventionalSerRow> conventional_ser_table(const ScenarioConfig& cfg) {
  std::vector<ConventionalSerRow> rows;
  for (double att : cfg.filter_attenuations) {
    ConventionalRxSpec rx = cfg.receiver;
    rx.filter_attenuation = att;
    ConventionalSerRow row;
    row.attenuation = att;
    row.symbol_energy = symbol_energy(cfg.link, rx, cfg.symbol_energy_mode);
    row.noise_energy =
        thermal_noise_energy(rx.temperature) +
        interference_energy_after_filter(cfg.ladder.fields.interference,
                                         cfg.link.interference_carrier,
                                         cfg.link.symbol_duration, rx);
    row.ser = conventional_ser(cfg.link.m_levels(), row.symbol_energy, row.noise_energy);
    rows.push_back(row);
  }
  return rows;
}

/// Writes one JSON record per row. Conventional rows are closed-form: no
/// symbols are drawn and the interval collapses onto the value.
inline std::vector<Json> cmd_ser(const ScenarioConfig& cfg, Receiver receiver, Engine engine,
                                 std::uint64_t n_symbols, std::ostream& out,
                                 unsigned threads = 0) {
  const std::string digest = config_digest(cfg);
  std::vector<Json> records;
  if (receiver != Receiver::rydberg) {
    for (const auto& row : conventional_ser_table(cfg)) {
      Json j;
      j["receiver"] = "conventional";
      j["parameter"] = row.attenuation;
      j["parameter_unit"] = "dB";
      j["ser"] = row.ser;
      j["ci_low"] = row.ser;
      j["ci_high"] = row.ser;
      j["errors"] = nullptr;
      j["n_symbols"] = 0;
      j["seed"] = cfg.seed;
      j["config_digest"] = digest;
      j["symbol_energy_j"] = row.symbol_energy;
      j["noise_energy_j"] = row.noise_energy;
      j["symbol_energy_mode"] = to_string(cfg.symbol_energy_mode);
      records.push_back(std::move(j));
    }
  }
  if (receiver != Receiver::conventional) {
    for (const auto& row : rydberg_ser_table(cfg, engine, n_symbols, threads)) {
      Json j;
      j["receiver"] = "rydberg";
      j["parameter"] = row.accuracy;
      j["parameter_unit"] = "%";
      j["ser"] = row.estimate.ser;
      j["ci_low"] = row.estimate.ci_low;
      j["ci_high"] = row.estimate.ci_high;
      j["errors"] = row.estimate.errors;
      j["n_symbols"] = row.estimate.n_symbols;
      j["seed"] = cfg.seed;
      j["config_digest"] = digest;
      j["engine"] = to_string(engine);
      j["readout_delta_c_rad_s"] = row.readout_delta_c;
      j["threshold_policy"] = to_string(cfg.threshold_policy);
      j["uncertainty_model"] = to_string(cfg.noise.uncertainty_model);
      j["min_separation_over_sigma"] = row.min_separation_over_sigma;
      records.push_back(std::move(j));
    }
  }
  for (const auto& j : records) out << j.dump() << "\n";
  return records;
}

}  // namespace rydberg
