#pragma once

// Scenario files. YAML with a unit suffix on every dimensional scalar; the grammar
// is described in README.md. parse -> serialize -> parse is exact: the
// serializer writes shortest round-trip decimals in canonical SI units.

#include <yaml-cpp/yaml.h>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rydberg/comms_link.hpp"
#include "rydberg/error.hpp"
#include "rydberg/ladder.hpp"
#include "rydberg/noise_model.hpp"
#include "rydberg/rng.hpp"
#include "rydberg/spectroscopy.hpp"
#include "rydberg/units.hpp"

namespace rydberg {

struct SpectrumSettings {
  double delta_c_min = 0.0;  ///< rad/s
  double delta_c_max = 0.0;  ///< rad/s
  std::size_t points = 0;

  std::vector<double> grid() const { return linear_grid(delta_c_min, delta_c_max, points); }

  void validate() const {
    require(points >= 1, ErrorKind::invalid_parameter, "need at least one grid point");
    require(std::isfinite(delta_c_min) && std::isfinite(delta_c_max) &&
                (points == 1 || delta_c_min < delta_c_max),
            ErrorKind::invalid_parameter, "grid bounds must be finite with min < max");
  }

  bool operator==(const SpectrumSettings&) const = default;
};

struct CalibrationSettings {
  std::size_t pilots = 1;
  double laser_fwhm = 0.0;  ///< rad/s
  bool jitter = false;
  SpectrumSettings search;

  /// Gaussian sigma of the pilot detuning jitter, 0 when jitter is off.
  double jitter_sigma() const {
    return jitter ? laser_fwhm / std::sqrt(8.0 * std::log(2.0)) : 0.0;
  }

  void validate() const {
    require(pilots >= 1, ErrorKind::invalid_parameter, "at least one pilot is required");
    require(std::isfinite(laser_fwhm) && laser_fwhm >= 0.0, ErrorKind::invalid_parameter,
            "laser FWHM must be non-negative");
    search.validate();
    require(search.points >= 5, ErrorKind::invalid_parameter,
            "the extremum search needs at least 5 points");
  }

  bool operator==(const CalibrationSettings&) const = default;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  Engine engine = Engine::numeric;
  LadderConfig ladder;
  NoiseSpec noise;
  bool auto_dephasing = true;  ///< dephasing time derived from Gamma_3, Gamma_4
  PamLinkConfig link;
  std::vector<double> calibration_accuracies;  ///< percent
  ThresholdPolicy threshold_policy = ThresholdPolicy::operating_point;
  CalibrationSettings calibration;
  ConventionalRxSpec receiver;
  std::vector<double> filter_attenuations;  ///< dB
  SymbolEnergyMode symbol_energy_mode = SymbolEnergyMode::square_of_mean;
  SpectrumSettings spectrum;

  bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

inline constexpr std::array<std::string_view, 4> kTransitionKeys{"1-2", "2-3", "3-4", "4-5"};

/// Walks a YAML mapping, keeps the dotted path for messages and rejects keys
/// nobody asked for.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (!node_.IsMap()) fail(ErrorKind::validation, where() + "expected a mapping");
  }

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) const { return static_cast<bool>(node_[std::string(key)]); }

  YAML::Node get(std::string_view key) {
    seen_.insert(std::string(key));
    const YAML::Node n = node_[std::string(key)];
    if (!n) fail(ErrorKind::validation, key_path(key) + ": missing");
    return n;
  }

  Section section(std::string_view key) { return Section(get(key), key_path(key)); }

  std::string scalar(std::string_view key) {
    const YAML::Node n = get(key);
    if (!n.IsScalar()) fail(ErrorKind::validation, at(n, key) + "expected a scalar");
    return n.Scalar();
  }

  double quantity(std::string_view key, units::Dimension d) {
    const YAML::Node n = get(key);
    return parse_scalar_quantity(n, key_path(key), d);
  }

  std::vector<double> quantity_list(std::string_view key, units::Dimension d) {
    const YAML::Node n = get(key);
    if (!n.IsSequence()) fail(ErrorKind::validation, at(n, key) + "expected a list");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i)
      out.push_back(parse_scalar_quantity(n[i], key_path(key) + "[" + std::to_string(i) + "]", d));
    return out;
  }

  std::size_t count(std::string_view key) {
    const std::string text = scalar(key);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      fail(ErrorKind::parse, at(node_[std::string(key)], key) + "expected a non-negative integer");
    return value;
  }

  bool flag(std::string_view key) {
    const std::string text = scalar(key);
    if (text == "true") return true;
    if (text == "false") return false;
    fail(ErrorKind::parse, at(node_[std::string(key)], key) + "expected true or false");
  }

  /// Fails on keys that were never read.
  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.Scalar();
      if (!seen_.count(key))
        fail(ErrorKind::validation, line_prefix(kv.first) + key_path(key) + ": unknown key");
    }
  }

  /// Runs `check`, prefixing any error with this section's path.
  template <class Check>
  void checked(std::string_view key, Check&& check) const {
    try {
      check();
    } catch (const Error& e) {
      fail(ErrorKind::validation, key_path(key) + ": " + e.what());
    }
  }

  static std::string line_prefix(const YAML::Node& n) {
    const auto mark = n.Mark();
    if (mark.is_null()) return {};
    return "line " + std::to_string(mark.line + 1) + ": ";
  }

 private:
  std::string where() const { return line_prefix(node_) + (path_.empty() ? "<root>" : path_) + ": "; }

  std::string at(const YAML::Node& n, std::string_view key) const {
    return line_prefix(n) + key_path(key) + ": ";
  }

  static double parse_scalar_quantity(const YAML::Node& n, const std::string& path,
                                      units::Dimension d) {
    if (!n.IsScalar()) fail(ErrorKind::validation, line_prefix(n) + path + ": expected a scalar");
    try {
      return units::parse_quantity(n.Scalar(), d);
    } catch (const Error& e) {
      fail(ErrorKind::parse, line_prefix(n) + path + ": " + e.what());
    }
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Parse>
auto parse_enum(Section& s, std::string_view key, Parse&& parse) {
  const std::string text = s.scalar(key);
  try {
    return parse(text);
  } catch (const Error& e) {
    fail(ErrorKind::parse, s.key_path(key) + ": " + e.what());
  }
}

inline SpectrumSettings parse_window(Section& s) {
  SpectrumSettings w;
  w.delta_c_min = s.quantity("delta_c_min", units::Dimension::angular_rate);
  w.delta_c_max = s.quantity("delta_c_max", units::Dimension::angular_rate);
  w.points = s.count("points");
  return w;
}

inline std::string fmt(double si, units::Dimension d) { return units::format_quantity(si, d); }

inline std::string fmt_list(const std::vector<double>& values, units::Dimension d) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt(values[i], d);
  }
  return out + "]";
}

}  // namespace detail

/// Parses a scenario from YAML text. `origin` prefixes error messages.
inline ScenarioConfig parse_config_text(std::string_view text, std::string_view origin = "<config>") {
  using units::Dimension;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::parse, std::string(origin) + ": line " + std::to_string(e.mark.line + 1) +
                               ": " + e.msg);
  }

  try {
    ScenarioConfig cfg;
    detail::Section top(root, "");

    {
      const std::string text_seed = top.scalar("seed");
      const auto [ptr, ec] =
          std::from_chars(text_seed.data(), text_seed.data() + text_seed.size(), cfg.seed);
      if (ec != std::errc{} || ptr != text_seed.data() + text_seed.size())
        fail(ErrorKind::parse, "seed: expected an unsigned 64-bit integer");
    }
    if (top.has("engine")) cfg.engine = detail::parse_enum(top, "engine", parse_engine);

    auto& lad = cfg.ladder;
    {
      auto levels = top.section("levels");
      lad.scheme.probe_wavelength = levels.quantity("probe_wavelength", Dimension::length);
      auto dipoles = levels.section("dipole_moments");
      for (std::size_t k = 0; k < detail::kTransitionKeys.size(); ++k) {
        const auto key = detail::kTransitionKeys[k];
        if (!dipoles.has(key))
          fail(ErrorKind::validation,
               dipoles.key_path(key) + ": missing dipole moment for transition " +
                   std::string(key));
        lad.scheme.dipole_moments[k] = dipoles.quantity(key, Dimension::dipole_moment);
      }
      dipoles.finish();
      levels.finish();
      top.checked("levels", [&] { lad.scheme.validate(); });
    }
    {
      auto f = top.section("fields");
      lad.fields.probe = f.quantity("probe", Dimension::electric_field);
      lad.fields.coupling = f.quantity("coupling", Dimension::electric_field);
      lad.fields.rf = f.quantity("rf", Dimension::electric_field);
      lad.fields.interference = f.quantity("interference", Dimension::electric_field);
      f.finish();
    }
    {
      auto d = top.section("detunings");
      lad.detunings.probe = d.quantity("probe", Dimension::angular_rate);
      lad.detunings.coupling = d.quantity("coupling", Dimension::angular_rate);
      lad.detunings.rf = d.quantity("rf", Dimension::angular_rate);
      lad.detunings.interference = d.quantity("interference", Dimension::angular_rate);
      d.finish();
    }
    {
      const auto rates = top.quantity_list("decay_rates", Dimension::angular_rate);
      if (rates.size() != lad.decays.level_rates.size())
        fail(ErrorKind::validation, "decay_rates: expected " +
                                        std::to_string(lad.decays.level_rates.size()) +
                                        " entries, got " + std::to_string(rates.size()));
      std::copy(rates.begin(), rates.end(), lad.decays.level_rates.begin());
      top.checked("decay_rates", [&] { lad.decays.validate(); });
    }
    {
      auto c = top.section("cell");
      lad.atomic_density = c.quantity("atomic_density", Dimension::number_density);
      lad.cell_length = c.quantity("length", Dimension::length);
      c.finish();
    }
    top.checked("fields", [&] { lad.validate(); });

    {
      auto n = top.section("noise");
      auto& ns = cfg.noise;
      ns.epsilon = n.quantity("epsilon", Dimension::dimensionless);
      if (n.has("uncertainty_model"))
        ns.uncertainty_model = detail::parse_enum(n, "uncertainty_model", parse_uncertainty_model);
      ns.n_rydberg = n.quantity("rydberg_atoms", Dimension::dimensionless);
      ns.integration_time = n.quantity("integration_time", Dimension::time);
      if (n.has("dephasing_time") && n.scalar("dephasing_time") != "auto") {
        cfg.auto_dephasing = false;
        ns.dephasing_time = n.quantity("dephasing_time", Dimension::time);
      } else {
        cfg.auto_dephasing = true;
        top.checked("noise.dephasing_time",
                    [&] { ns.dephasing_time = rf_dephasing_time(lad.decays); });
      }
      ns.derivative_step = n.quantity("derivative_step", Dimension::electric_field);
      ns.rf_dipole = lad.scheme.dipole(2, 3);
      n.finish();
      top.checked("noise", [&] { ns.validate(); });
    }
    {
      auto l = top.section("link");
      auto& link = cfg.link;
      link.field_levels = l.quantity_list("field_levels", Dimension::electric_field);
      link.symbol_duration = l.quantity("symbol_duration", Dimension::time);
      link.rf_carrier = l.quantity("rf_carrier", Dimension::frequency);
      link.interference_carrier = l.quantity("interference_carrier", Dimension::frequency);
      cfg.calibration_accuracies = l.quantity_list("calibration_accuracies", Dimension::percent);
      if (l.has("threshold_policy"))
        cfg.threshold_policy = detail::parse_enum(l, "threshold_policy", parse_threshold_policy);
      l.finish();
      top.checked("link", [&] { link.validate(); });
      for (std::size_t i = 0; i < cfg.calibration_accuracies.size(); ++i)
        top.checked("link.calibration_accuracies[" + std::to_string(i) + "]", [&] {
          calibrated_readout_detuning(0.0, cfg.calibration_accuracies[i]);
        });
    }
    {
      auto c = top.section("calibration");
      auto& cal = cfg.calibration;
      if (c.has("pilots")) cal.pilots = c.count("pilots");
      cal.laser_fwhm = c.quantity("laser_fwhm", Dimension::angular_rate);
      if (c.has("jitter")) cal.jitter = c.flag("jitter");
      auto w = c.section("search");
      cal.search = detail::parse_window(w);
      w.finish();
      c.finish();
      top.checked("calibration", [&] { cal.validate(); });
    }
    {
      auto c = top.section("conventional");
      auto& rx = cfg.receiver;
      cfg.filter_attenuations = c.quantity_list("filter_attenuations", Dimension::decibel);
      rx.antenna_gain = c.quantity("antenna_gain", Dimension::dimensionless);
      rx.temperature = c.quantity("temperature", Dimension::temperature);
      rx.impedance = c.quantity("impedance", Dimension::impedance);
      if (c.has("symbol_energy_mode"))
        cfg.symbol_energy_mode =
            detail::parse_enum(c, "symbol_energy_mode", parse_symbol_energy_mode);
      c.finish();
      top.checked("conventional", [&] { rx.validate(); });
      for (std::size_t i = 0; i < cfg.filter_attenuations.size(); ++i)
        top.checked("conventional.filter_attenuations[" + std::to_string(i) + "]", [&] {
          ConventionalRxSpec probe = rx;
          probe.filter_attenuation = cfg.filter_attenuations[i];
          probe.validate();
        });
    }
    {
      auto s = top.section("spectrum");
      cfg.spectrum = detail::parse_window(s);
      s.finish();
      top.checked("spectrum", [&] { cfg.spectrum.validate(); });
    }
    top.finish();
    return cfg;
  } catch (const Error& e) {
    fail(e.kind(), std::string(origin) + ": " + e.what());
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::parse, std::string(origin) + ": line " + std::to_string(e.mark.line + 1) +
                               ": " + e.msg);
  }
}

inline ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorKind::io, "cannot read config file '" + path.string() + "'");
  return parse_config_text(buf.str(), path.string());
}

/// Canonical text form. Equal configs serialize to identical bytes.
inline std::string serialize_config(const ScenarioConfig& cfg) {
  using units::Dimension;
  using detail::fmt;
  using detail::fmt_list;
  const auto& lad = cfg.ladder;
  std::ostringstream o;
  o << "seed: " << cfg.seed << "\n";
  o << "engine: " << to_string(cfg.engine) << "\n";
  o << "levels:\n";
  o << "  probe_wavelength: " << fmt(lad.scheme.probe_wavelength, Dimension::length) << "\n";
  o << "  dipole_moments:\n";
  for (std::size_t k = 0; k < detail::kTransitionKeys.size(); ++k)
    o << "    \"" << detail::kTransitionKeys[k]
      << "\": " << fmt(lad.scheme.dipole_moments[k], Dimension::dipole_moment) << "\n";
  o << "fields:\n";
  o << "  probe: " << fmt(lad.fields.probe, Dimension::electric_field) << "\n";
  o << "  coupling: " << fmt(lad.fields.coupling, Dimension::electric_field) << "\n";
  o << "  rf: " << fmt(lad.fields.rf, Dimension::electric_field) << "\n";
  o << "  interference: " << fmt(lad.fields.interference, Dimension::electric_field) << "\n";
  o << "detunings:\n";
  o << "  probe: " << fmt(lad.detunings.probe, Dimension::angular_rate) << "\n";
  o << "  coupling: " << fmt(lad.detunings.coupling, Dimension::angular_rate) << "\n";
  o << "  rf: " << fmt(lad.detunings.rf, Dimension::angular_rate) << "\n";
  o << "  interference: " << fmt(lad.detunings.interference, Dimension::angular_rate) << "\n";
  o << "decay_rates: "
    << fmt_list({lad.decays.level_rates.begin(), lad.decays.level_rates.end()},
                Dimension::angular_rate)
    << "\n";
  o << "cell:\n";
  o << "  atomic_density: " << fmt(lad.atomic_density, Dimension::number_density) << "\n";
  o << "  length: " << fmt(lad.cell_length, Dimension::length) << "\n";
  o << "noise:\n";
  o << "  epsilon: " << fmt(cfg.noise.epsilon, Dimension::dimensionless) << "\n";
  o << "  uncertainty_model: " << to_string(cfg.noise.uncertainty_model) << "\n";
  o << "  rydberg_atoms: " << fmt(cfg.noise.n_rydberg, Dimension::dimensionless) << "\n";
  o << "  integration_time: " << fmt(cfg.noise.integration_time, Dimension::time) << "\n";
  o << "  dephasing_time: "
    << (cfg.auto_dephasing ? std::string("auto") : fmt(cfg.noise.dephasing_time, Dimension::time))
    << "\n";
  o << "  derivative_step: " << fmt(cfg.noise.derivative_step, Dimension::electric_field) << "\n";
  o << "link:\n";
  o << "  field_levels: " << fmt_list(cfg.link.field_levels, Dimension::electric_field) << "\n";
  o << "  symbol_duration: " << fmt(cfg.link.symbol_duration, Dimension::time) << "\n";
  o << "  rf_carrier: " << fmt(cfg.link.rf_carrier, Dimension::frequency) << "\n";
  o << "  interference_carrier: " << fmt(cfg.link.interference_carrier, Dimension::frequency)
    << "\n";
  o << "  calibration_accuracies: " << fmt_list(cfg.calibration_accuracies, Dimension::percent)
    << "\n";
  o << "  threshold_policy: " << to_string(cfg.threshold_policy) << "\n";
  o << "calibration:\n";
  o << "  pilots: " << cfg.calibration.pilots << "\n";
  o << "  laser_fwhm: " << fmt(cfg.calibration.laser_fwhm, Dimension::angular_rate) << "\n";
  o << "  jitter: " << (cfg.calibration.jitter ? "true" : "false") << "\n";
  o << "  search:\n";
  o << "    delta_c_min: " << fmt(cfg.calibration.search.delta_c_min, Dimension::angular_rate)
    << "\n";
  o << "    delta_c_max: " << fmt(cfg.calibration.search.delta_c_max, Dimension::angular_rate)
    << "\n";
  o << "    points: " << cfg.calibration.search.points << "\n";
  o << "conventional:\n";
  o << "  filter_attenuations: " << fmt_list(cfg.filter_attenuations, Dimension::decibel) << "\n";
  o << "  antenna_gain: " << fmt(cfg.receiver.antenna_gain, Dimension::dimensionless) << "\n";
  o << "  temperature: " << fmt(cfg.receiver.temperature, Dimension::temperature) << "\n";
  o << "  impedance: " << fmt(cfg.receiver.impedance, Dimension::impedance) << "\n";
  o << "  symbol_energy_mode: " << to_string(cfg.symbol_energy_mode) << "\n";
  o << "spectrum:\n";
  o << "  delta_c_min: " << fmt(cfg.spectrum.delta_c_min, Dimension::angular_rate) << "\n";
  o << "  delta_c_max: " << fmt(cfg.spectrum.delta_c_max, Dimension::angular_rate) << "\n";
  o << "  points: " << cfg.spectrum.points << "\n";
  return o.str();
}

/// 16 hex digits of FNV-1a over the canonical serialization.
inline std::string config_digest(const ScenarioConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize_config(cfg))));
  return buf;
}

}  // namespace rydberg
