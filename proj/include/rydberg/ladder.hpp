#pragma once

// The physical scenario: level scheme, applied field amplitudes, detunings,
// decay rates and vapor-cell geometry, plus the three interchangeable
// probe-coherence engines.

#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "rydberg/constants.hpp"
#include "rydberg/error.hpp"
#include "rydberg/quantum_core.hpp"
#include "rydberg/weak_probe.hpp"

namespace rydberg {

/// Peak field amplitudes at the atoms, V/m.
struct FieldAmplitudes {
  double probe = 0.0;
  double coupling = 0.0;
  double rf = 0.0;
  double interference = 0.0;
  bool operator==(const FieldAmplitudes&) const = default;
};

/// Detunings of the four drives, rad/s.
struct Detunings {
  double probe = 0.0;
  double coupling = 0.0;
  double rf = 0.0;
  double interference = 0.0;
  bool operator==(const Detunings&) const = default;
};

/// Beer-Lambert inputs.
struct CellSpec {
  double atomic_density = 0.0;    ///< atoms / m^3
  double cell_length = 0.0;       ///< m
  double probe_dipole = 0.0;      ///< mu_21, C*m
  double probe_wavelength = 0.0;  ///< m

  void validate() const {
    for (double v : {atomic_density, cell_length, probe_dipole, probe_wavelength})
      require(std::isfinite(v) && v > 0.0, ErrorKind::invalid_parameter,
              "cell parameters must be positive and finite");
  }
};

struct LadderConfig {
  LevelScheme scheme;
  FieldAmplitudes fields;
  Detunings detunings;
  DecaySpec decays;
  double atomic_density = 0.0;  ///< atoms / m^3
  double cell_length = 0.0;     ///< m

  DriveSet drives() const {
    DriveSet d;
    d.probe_rabi = rabi_from_field(scheme.dipole(0, 1), fields.probe);
    d.coupling_rabi = rabi_from_field(scheme.dipole(1, 2), fields.coupling);
    d.rf_rabi = rabi_from_field(scheme.dipole(2, 3), fields.rf);
    d.interference_rabi = rabi_from_field(scheme.dipole(3, 4), fields.interference);
    d.probe_detuning = detunings.probe;
    d.coupling_detuning = detunings.coupling;
    d.rf_detuning = detunings.rf;
    d.interference_detuning = detunings.interference;
    return d;
  }

  CellSpec cell() const {
    return {atomic_density, cell_length, scheme.dipole(0, 1), scheme.probe_wavelength};
  }

  void validate() const {
    scheme.validate();
    decays.validate();
    cell().validate();
    require(fields.probe > 0.0, ErrorKind::invalid_parameter,
            "probe field must be positive (transmission normalizes by Omega_p)");
    drives().validate();
  }

  LadderConfig with_coupling_detuning(double delta_c) const {
    LadderConfig c = *this;
    c.detunings.coupling = delta_c;
    return c;
  }

  LadderConfig with_rf_field(double e_rf) const {
    LadderConfig c = *this;
    c.fields.rf = e_rf;
    return c;
  }

  LadderConfig with_interference_field(double e_i) const {
    LadderConfig c = *this;
    c.fields.interference = e_i;
    return c;
  }

  bool operator==(const LadderConfig&) const = default;
};

enum class Engine { numeric, weakprobe, stark };

inline std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::numeric: return "numeric";
    case Engine::weakprobe: return "weakprobe";
    case Engine::stark: return "stark";
  }
  return "numeric";
}

inline Engine parse_engine(std::string_view name) {
  if (name == "numeric") return Engine::numeric;
  if (name == "weakprobe" || name == "exact-weakprobe") return Engine::weakprobe;
  if (name == "stark" || name == "stark-approx") return Engine::stark;
  fail(ErrorKind::usage, "unknown engine '" + std::string(name) +
                             "' (expected numeric, weakprobe or stark)");
}

/// rho_21 from the chosen engine.
inline std::complex<double> probe_coherence(const LadderConfig& config, Engine engine) {
  const DriveSet drives = config.drives();
  switch (engine) {
    case Engine::numeric:
      return steady_state(drives, config.decays).probe_coherence();
    case Engine::weakprobe:
      return rho21_exact_weakprobe(drives, config.decays);
    case Engine::stark:
      return rho21_stark_approx(drives, config.decays).rho21;
  }
  return {};
}

}  // namespace rydberg
