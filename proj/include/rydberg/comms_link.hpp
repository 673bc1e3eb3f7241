#pragma once

// 8-PAM link over the Rydberg receiver and the conventional-receiver baseline.
//
// Rydberg path: locate the AC-Stark-shifted readout extremum with pilots, read
// the transmission at (a possibly miscalibrated) detuning, slice it against
// midpoint thresholds and count symbol errors under the intrinsic noise model.
// Conventional path: closed-form M-PAM symbol error rate with the filtered
// interference energy added to kT.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "rydberg/constants.hpp"
#include "rydberg/error.hpp"
#include "rydberg/ladder.hpp"
#include "rydberg/noise_model.hpp"
#include "rydberg/parallel.hpp"
#include "rydberg/rng.hpp"
#include "rydberg/spectroscopy.hpp"
#include "rydberg/weak_probe.hpp"

namespace rydberg {

struct PamLinkConfig {
  std::vector<double> field_levels;       ///< V/m, one per symbol
  double symbol_duration = 0.0;           ///< s
  double rf_carrier = 0.0;                ///< Hz
  double interference_carrier = 0.0;      ///< Hz
  double calibration_accuracy = 100.0;    ///< percent

  std::size_t m_levels() const { return field_levels.size(); }

  void validate() const {
    require(field_levels.size() >= 2, ErrorKind::invalid_parameter,
            "PAM alphabet needs at least two levels");
    for (std::size_t k = 0; k < field_levels.size(); ++k) {
      require(std::isfinite(field_levels[k]) && field_levels[k] >= 0.0,
              ErrorKind::invalid_parameter, "PAM field levels must be finite and non-negative");
      if (k > 0)
        require(field_levels[k - 1] < field_levels[k], ErrorKind::invalid_parameter,
                "PAM field levels must be strictly increasing");
    }
    for (double v : {symbol_duration, rf_carrier, interference_carrier})
      require(std::isfinite(v) && v > 0.0, ErrorKind::invalid_parameter,
              "symbol duration and carrier frequencies must be positive");
    require(calibration_accuracy > 0.0 && calibration_accuracy <= 100.0,
            ErrorKind::invalid_parameter, "calibration accuracy must lie in (0, 100] percent");
  }

  bool operator==(const PamLinkConfig&) const = default;
};

struct ConventionalRxSpec {
  double filter_attenuation = 0.0;  ///< dB
  double antenna_gain = 1.5;
  double temperature = 290.0;       ///< K
  double impedance = constants::free_space_impedance;  ///< ohm

  void validate() const {
    require(std::isfinite(filter_attenuation) && filter_attenuation >= 0.0,
            ErrorKind::invalid_parameter, "filter attenuation must be non-negative");
    require(std::isfinite(antenna_gain) && antenna_gain > 0.0, ErrorKind::invalid_parameter,
            "antenna gain must be positive");
    require(std::isfinite(temperature) && temperature > 0.0, ErrorKind::invalid_parameter,
            "temperature must be positive");
    require(std::isfinite(impedance) && impedance > 0.0, ErrorKind::invalid_parameter,
            "impedance must be positive");
  }

  bool operator==(const ConventionalRxSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Calibration

/// Readout detuning for a calibration accuracy: 0 % sits at the
/// interference-free point delta_c = 0, 100 % on the true shifted extremum.
inline double calibrated_readout_detuning(double true_shift, double accuracy_percent) {
  require(std::isfinite(accuracy_percent) && accuracy_percent > 0.0 && accuracy_percent <= 100.0,
          ErrorKind::invalid_parameter, "calibration accuracy must lie in (0, 100] percent");
  require(std::isfinite(true_shift), ErrorKind::invalid_parameter, "shift must be finite");
  return accuracy_percent / 100.0 * true_shift;
}

/// Where the readout extremum sits according to the AC Stark approximation:
/// the two-photon-plus-RF resonance Delta_p + Delta_c + Delta'_RF = 0.
inline double analytic_extremum_detuning(const LadderConfig& config) {
  const DriveSet d = config.drives();
  return ac_stark_shift(d.interference_rabi, d.interference_detuning) - d.probe_detuning -
         d.rf_detuning;
}

/// Coarse sweep over `grid` followed by a zoomed sweep across four coarse steps.
inline Extremum locate_readout_extremum(const LadderConfig& config, double e_rf,
                                        const std::vector<double>& grid, Engine engine,
                                        unsigned threads = 0) {
  const LadderConfig probe_config = config.with_rf_field(e_rf);
  const auto coarse = find_amplitude_extremum(sweep_spectrum(probe_config, grid, engine, threads));
  if (grid.size() < 2) return coarse;
  const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  const auto fine_grid = linear_grid(coarse.delta_c - 2.0 * step, coarse.delta_c + 2.0 * step, 81);
  return find_amplitude_extremum(sweep_spectrum(probe_config, fine_grid, engine, threads));
}

struct CalibrationReport {
  std::size_t pilots = 0;
  double representative_field = 0.0;  ///< V/m
  double single_shot = 0.0;           ///< rad/s
  double pilot_mean = 0.0;            ///< rad/s
  double pilot_std_error = 0.0;       ///< rad/s
  double jitter_sigma = 0.0;          ///< rad/s, 0 = jitter off
  double analytic = 0.0;              ///< rad/s
  double relative_difference = 0.0;   ///< (pilot_mean - analytic) / analytic
};

/// Pilot calibration at the mid-alphabet field. Each pilot observes the
/// extremum plus an optional Gaussian detuning jitter (laser instability).
inline CalibrationReport run_pilot_calibration(const LadderConfig& config,
                                               const PamLinkConfig& link,
                                               const std::vector<double>& grid,
                                               std::size_t pilots, std::uint64_t seed,
                                               double jitter_sigma, Engine engine,
                                               unsigned threads = 0) {
  require(pilots >= 1, ErrorKind::invalid_parameter, "at least one pilot is required");
  require(std::isfinite(jitter_sigma) && jitter_sigma >= 0.0, ErrorKind::invalid_parameter,
          "jitter sigma must be non-negative");
  link.validate();

  CalibrationReport report;
  report.pilots = pilots;
  report.jitter_sigma = jitter_sigma;
  report.representative_field = link.field_levels[link.m_levels() / 2];
  report.single_shot =
      locate_readout_extremum(config, report.representative_field, grid, engine, threads).delta_c;

  NoiseStream stream(derive_seed(seed, "calibrate/pilots"), 0);
  std::vector<double> offsets(pilots, 0.0);
  if (jitter_sigma > 0.0)
    for (auto& x : offsets) x = jitter_sigma * stream.standard_normal();
  const double n = static_cast<double>(pilots);
  const double mean_offset = std::accumulate(offsets.begin(), offsets.end(), 0.0) / n;
  report.pilot_mean = report.single_shot + mean_offset;
  if (pilots > 1) {
    double ss = 0.0;
    for (double x : offsets) ss += (x - mean_offset) * (x - mean_offset);
    report.pilot_std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  report.analytic = analytic_extremum_detuning(config);
  report.relative_difference =
      report.analytic != 0.0 ? (report.pilot_mean - report.analytic) / report.analytic : 0.0;
  return report;
}

// ---------------------------------------------------------------------------
// Demodulation

enum class LevelOrder { increasing, decreasing };

/// Throws demodulation-infeasible unless the levels are strictly monotone.
inline LevelOrder level_order(const std::vector<double>& levels) {
  if (levels.size() < 2)
    fail(ErrorKind::demodulation_infeasible, "need at least two reference levels");
  const bool up = levels[1] > levels[0];
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const bool ok = up ? levels[k] > levels[k - 1] : levels[k] < levels[k - 1];
    if (!ok)
      fail(ErrorKind::demodulation_infeasible,
           "reference transmissions are not strictly monotone at symbol " + std::to_string(k));
  }
  return up ? LevelOrder::increasing : LevelOrder::decreasing;
}

/// Noiseless transmission of every symbol at a fixed readout detuning.
inline std::vector<double> reference_levels(const LadderConfig& config, const PamLinkConfig& link,
                                            double readout_delta_c, Engine engine,
                                            unsigned threads = 0) {
  link.validate();
  std::vector<double> levels(link.m_levels());
  parallel_for(
      levels.size(),
      [&](std::size_t k) {
        levels[k] = transmission_at(config, readout_delta_c, link.field_levels[k], engine);
      },
      threads);
  level_order(levels);
  return levels;
}

/// Midpoints between adjacent reference levels.
inline std::vector<double> decision_thresholds(const std::vector<double>& levels) {
  level_order(levels);
  std::vector<double> thresholds(levels.size() - 1);
  for (std::size_t k = 0; k + 1 < levels.size(); ++k)
    thresholds[k] = 0.5 * (levels[k] + levels[k + 1]);
  return thresholds;
}

/// Symbol index for a measured transmission. A value exactly on a threshold
/// goes to the lower-index symbol; values beyond the outer levels map to the
/// edge symbols.
inline std::size_t demodulate(double transmission, const std::vector<double>& thresholds,
                              LevelOrder order) {
  if (order == LevelOrder::increasing)
    return static_cast<std::size_t>(
        std::lower_bound(thresholds.begin(), thresholds.end(), transmission) - thresholds.begin());
  return static_cast<std::size_t>(std::lower_bound(thresholds.begin(), thresholds.end(),
                                                   transmission, std::greater<>()) -
                                  thresholds.begin());
}

/// Where the decision thresholds come from.
enum class ThresholdPolicy {
  operating_point,     ///< reference levels at the (miscalibrated) readout detuning
  reference_extremum,  ///< reference levels at the true shifted extremum
};

inline std::string_view to_string(ThresholdPolicy p) {
  return p == ThresholdPolicy::operating_point ? "operating-point" : "reference-extremum";
}

inline ThresholdPolicy parse_threshold_policy(std::string_view name) {
  if (name == "operating-point") return ThresholdPolicy::operating_point;
  if (name == "reference-extremum") return ThresholdPolicy::reference_extremum;
  fail(ErrorKind::parse, "unknown threshold policy '" + std::string(name) +
                             "' (expected operating-point or reference-extremum)");
}

/// Everything the per-symbol Monte Carlo loop needs, computed once per alphabet.
struct RydbergReceiverModel {
  double readout_delta_c = 0.0;
  std::vector<double> levels;      ///< noiseless T per symbol at the readout detuning
  std::vector<double> slopes;      ///< dT/dE per symbol, per V/m
  std::vector<double> sigmas;      ///< field-noise sigma per symbol, V/m
  std::vector<double> thresholds;
  LevelOrder order = LevelOrder::decreasing;

  /// Transmission-domain noise standard deviation per symbol.
  std::vector<double> transmission_sigmas() const {
    std::vector<double> out(levels.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::abs(slopes[k]) * sigmas[k];
    return out;
  }
};

/// `threshold_levels`, when given, replaces the operating-point levels as the
/// source of decision thresholds.
inline RydbergReceiverModel prepare_rydberg_receiver(
    const LadderConfig& config, const NoiseSpec& noise, const PamLinkConfig& link,
    double readout_delta_c, Engine engine, const std::vector<double>* threshold_levels = nullptr,
    unsigned threads = 0) {
  noise.validate();
  RydbergReceiverModel model;
  model.readout_delta_c = readout_delta_c;
  model.levels = reference_levels(config, link, readout_delta_c, engine, threads);
  const std::size_t m = link.m_levels();
  model.slopes.resize(m);
  model.sigmas.resize(m);
  parallel_for(
      m,
      [&](std::size_t k) {
        const double e = link.field_levels[k];
        model.slopes[k] =
            transmission_slope(config, e, noise.derivative_step, readout_delta_c, engine);
        model.sigmas[k] = total_noise_sigma(noise, e);
      },
      threads);
  const auto& source = threshold_levels ? *threshold_levels : model.levels;
  require(source.size() == m, ErrorKind::invalid_parameter,
          "threshold levels do not match the alphabet size");
  model.order = level_order(source);
  model.thresholds = decision_thresholds(source);
  return model;
}

struct SerEstimate {
  std::uint64_t errors = 0;
  std::uint64_t n_symbols = 0;
  double ser = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Wilson score interval for a binomial proportion (z = 1.96 gives 95 %).
inline std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t n,
                                                 double z = 1.959963984540054) {
  require(n >= 1, ErrorKind::invalid_parameter, "Wilson interval needs n >= 1");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(errors) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Symbols per random stream. Stream b covers symbol indices [b*kSymbolBlock, (b+1)*kSymbolBlock).
inline constexpr std::uint64_t kSymbolBlock = 1u << 16;

/// Monte Carlo symbol error rate: uniform symbols, first-order noisy
/// transmission, threshold slicing. Bit-reproducible for a given seed
/// regardless of `threads`.
inline SerEstimate estimate_ser_rydberg(const RydbergReceiverModel& model, std::uint64_t n_symbols,
                                        std::uint64_t seed, unsigned threads = 0) {
  require(n_symbols >= 1, ErrorKind::invalid_parameter, "need at least one symbol");
  const std::size_t m = model.levels.size();
  const std::uint64_t blocks = (n_symbols + kSymbolBlock - 1) / kSymbolBlock;
  std::vector<std::uint64_t> block_errors(static_cast<std::size_t>(blocks), 0);
  parallel_for(
      static_cast<std::size_t>(blocks),
      [&](std::size_t b) {
        NoiseStream stream(seed, b);
        std::uniform_int_distribution<std::size_t> pick(0, m - 1);
        const std::uint64_t begin = b * kSymbolBlock;
        const std::uint64_t end = std::min(n_symbols, begin + kSymbolBlock);
        std::uint64_t errors = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
          const std::size_t sent = pick(stream.engine());
          const double t = sample_noisy_transmission(model.levels[sent], model.slopes[sent],
                                                     model.sigmas[sent], stream);
          if (demodulate(t, model.thresholds, model.order) != sent) ++errors;
        }
        block_errors[b] = errors;
      },
      threads);

  SerEstimate est;
  est.n_symbols = n_symbols;
  est.errors = std::accumulate(block_errors.begin(), block_errors.end(), std::uint64_t{0});
  est.ser = static_cast<double>(est.errors) / static_cast<double>(n_symbols);
  std::tie(est.ci_low, est.ci_high) = wilson_interval(est.errors, n_symbols);
  return est;
}

// ---------------------------------------------------------------------------
// Conventional receiver

inline double q_function(double x) {
  require(std::isfinite(x), ErrorKind::invalid_parameter, "Q-function argument must be finite");
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// 2 (1 - 1/M) Q(sqrt(6 Es / ((M^2 - 1) N))).
inline double conventional_ser(std::size_t m, double es, double n_eff) {
  require(m >= 2, ErrorKind::invalid_parameter, "M-PAM needs M >= 2");
  require(std::isfinite(es) && es >= 0.0, ErrorKind::invalid_parameter,
          "symbol energy must be non-negative");
  require(std::isfinite(n_eff) && n_eff > 0.0, ErrorKind::invalid_parameter,
          "effective noise power must be positive");
  const double mm = static_cast<double>(m);
  return 2.0 * (1.0 - 1.0 / mm) * q_function(std::sqrt(6.0 * es / ((mm * mm - 1.0) * n_eff)));
}

/// A_eff = lambda^2 G / (4 pi).
inline double effective_antenna_area(double frequency, double gain) {
  require(std::isfinite(frequency) && frequency > 0.0, ErrorKind::invalid_parameter,
          "frequency must be positive");
  require(std::isfinite(gain) && gain > 0.0, ErrorKind::invalid_parameter,
          "antenna gain must be positive");
  const double lambda = constants::speed_of_light / frequency;
  return lambda * lambda * gain / (4.0 * constants::pi);
}

enum class SymbolEnergyMode {
  square_of_mean,   ///< mean(E)^2, as the link budget is usually quoted here
  mean_of_squares,  ///< mean(E^2), the average energy of the alphabet
};

inline std::string_view to_string(SymbolEnergyMode m) {
  return m == SymbolEnergyMode::square_of_mean ? "square-of-mean" : "mean-of-squares";
}

inline SymbolEnergyMode parse_symbol_energy_mode(std::string_view name) {
  if (name == "square-of-mean") return SymbolEnergyMode::square_of_mean;
  if (name == "mean-of-squares") return SymbolEnergyMode::mean_of_squares;
  fail(ErrorKind::parse, "unknown symbol energy mode '" + std::string(name) +
                             "' (expected square-of-mean or mean-of-squares)");
}

/// Es = <E>^2 / (2 Z0) * T_s * A_eff(f_RF), J.
inline double symbol_energy(const PamLinkConfig& link, const ConventionalRxSpec& rx,
                            SymbolEnergyMode mode = SymbolEnergyMode::square_of_mean) {
  rx.validate();
  require(!link.field_levels.empty(), ErrorKind::invalid_parameter, "empty PAM alphabet");
  const double n = static_cast<double>(link.field_levels.size());
  double field_sq = 0.0;
  if (mode == SymbolEnergyMode::square_of_mean) {
    const double mean = std::accumulate(link.field_levels.begin(), link.field_levels.end(), 0.0) / n;
    field_sq = mean * mean;
  } else {
    for (double e : link.field_levels) field_sq += e * e;
    field_sq /= n;
  }
  return field_sq / (2.0 * rx.impedance) * link.symbol_duration *
         effective_antenna_area(link.rf_carrier, rx.antenna_gain);
}

/// Interference energy per symbol after the receive filter, J.
inline double interference_energy_after_filter(double e_i, double f_i, double t_s,
                                               const ConventionalRxSpec& rx) {
  rx.validate();
  require(std::isfinite(e_i) && e_i >= 0.0, ErrorKind::invalid_parameter,
          "interference field must be non-negative");
  require(std::isfinite(t_s) && t_s > 0.0, ErrorKind::invalid_parameter,
          "symbol duration must be positive");
  return e_i * e_i / (2.0 * rx.impedance) * t_s * effective_antenna_area(f_i, rx.antenna_gain) *
         std::pow(10.0, -rx.filter_attenuation / 10.0);
}

/// kT, J.
inline double thermal_noise_energy(double temperature) {
  require(std::isfinite(temperature) && temperature > 0.0, ErrorKind::invalid_parameter,
          "temperature must be positive");
  return constants::boltzmann * temperature;
}

/// Conventional-receiver SER with N_eff = kT + filtered interference energy.
inline double conventional_receiver_ser(const PamLinkConfig& link, const ConventionalRxSpec& rx,
                                        double interference_field,
                                        SymbolEnergyMode mode = SymbolEnergyMode::square_of_mean) {
  const double es = symbol_energy(link, rx, mode);
  const double n_eff = thermal_noise_energy(rx.temperature) +
                       interference_energy_after_filter(interference_field,
                                                        link.interference_carrier,
                                                        link.symbol_duration, rx);
  return conventional_ser(link.m_levels(), es, n_eff);
}

}  // namespace rydberg
