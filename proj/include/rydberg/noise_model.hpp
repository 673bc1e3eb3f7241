#pragma once

// Intrinsic receiver noise: field-measurement uncertainty and quantum
// projection noise, combined in field units and mapped onto the transmission
// through the local slope dT/dE.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "rydberg/constants.hpp"
#include "rydberg/error.hpp"
#include "rydberg/ladder.hpp"
#include "rydberg/rng.hpp"
#include "rydberg/spectroscopy.hpp"

namespace rydberg {

/// How epsilon scales the measurement-uncertainty noise.
enum class UncertaintyModel {
  relative_std,       ///< sigma_UN = epsilon * E    (epsilon is a relative uncertainty)
  variance_fraction,  ///< sigma_UN^2 = epsilon * E^2
};

inline std::string_view to_string(UncertaintyModel m) {
  return m == UncertaintyModel::relative_std ? "relative-std" : "variance-fraction";
}

inline UncertaintyModel parse_uncertainty_model(std::string_view name) {
  if (name == "relative-std") return UncertaintyModel::relative_std;
  if (name == "variance-fraction") return UncertaintyModel::variance_fraction;
  fail(ErrorKind::parse, "unknown uncertainty model '" + std::string(name) +
                             "' (expected relative-std or variance-fraction)");
}

struct NoiseSpec {
  double epsilon = 0.0;
  UncertaintyModel uncertainty_model = UncertaintyModel::relative_std;
  double n_rydberg = 1.0;         ///< number of excited Rydberg atoms
  double integration_time = 0.0;  ///< s
  double dephasing_time = 0.0;    ///< s
  double rf_dipole = 0.0;         ///< mu_34, C*m
  double derivative_step = 0.0;   ///< V/m

  void validate() const {
    require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 1.0,
            ErrorKind::invalid_parameter, "epsilon must lie in [0, 1)");
    require(std::isfinite(n_rydberg) && n_rydberg >= 1.0, ErrorKind::invalid_parameter,
            "Rydberg atom number must be at least 1");
    for (double v : {integration_time, dephasing_time, derivative_step, rf_dipole})
      require(std::isfinite(v) && v > 0.0, ErrorKind::invalid_parameter,
              "integration time, dephasing time, RF dipole and derivative step must be positive");
  }

  bool operator==(const NoiseSpec&) const = default;
};

/// T2 = 1 / (0.5 (Gamma_3 + Gamma_4)) for the RF transition.
inline double rf_dephasing_time(const DecaySpec& decays) {
  const double rate = 0.5 * (decays.level_rates[2] + decays.level_rates[3]);
  require(rate > 0.0, ErrorKind::invalid_parameter,
          "RF dephasing time needs a non-zero Gamma_3 + Gamma_4");
  return 1.0 / rate;
}

/// sigma_UN^2, (V/m)^2.
inline double uncertainty_variance(const NoiseSpec& spec, double e_rf) {
  require(std::isfinite(e_rf) && e_rf >= 0.0, ErrorKind::invalid_parameter,
          "RF field must be finite and non-negative");
  switch (spec.uncertainty_model) {
    case UncertaintyModel::relative_std: return (spec.epsilon * e_rf) * (spec.epsilon * e_rf);
    case UncertaintyModel::variance_fraction: return spec.epsilon * e_rf * e_rf;
  }
  return 0.0;
}

/// Projection-noise-limited field, E_min = 2 pi hbar / (|mu_34| sqrt(N_R T_i T_2)).
/// Its square is the projection-noise variance.
inline double projection_min_field(const NoiseSpec& spec) {
  spec.validate();
  return constants::two_pi * constants::hbar /
         (std::abs(spec.rf_dipole) *
          std::sqrt(spec.n_rydberg * spec.integration_time * spec.dephasing_time));
}

inline double total_noise_sigma(const NoiseSpec& spec, double e_rf) {
  const double e_min = projection_min_field(spec);
  return std::sqrt(uncertainty_variance(spec, e_rf) + e_min * e_min);
}

/// dT/dE at a fixed readout detuning, per V/m.
///
/// Central difference; where e_rf - delta_e would be a negative amplitude the
/// second-order forward difference (-3 T0 + 4 T1 - T2) / (2 delta_e) is used.
inline double transmission_slope(const LadderConfig& config, double e_rf, double delta_e,
                                 double readout_delta_c, Engine engine) {
  require(std::isfinite(delta_e) && delta_e > 0.0, ErrorKind::invalid_parameter,
          "derivative step must be positive");
  require(std::isfinite(e_rf) && e_rf >= 0.0, ErrorKind::invalid_parameter,
          "RF field must be finite and non-negative");
  auto t = [&](double e) { return transmission_at(config, readout_delta_c, e, engine); };
  if (e_rf >= delta_e) return (t(e_rf + delta_e) - t(e_rf - delta_e)) / (2.0 * delta_e);
  return (-3.0 * t(e_rf) + 4.0 * t(e_rf + delta_e) - t(e_rf + 2.0 * delta_e)) / (2.0 * delta_e);
}

/// T + (dT/dE) n with n ~ N(0, sigma^2). Not clamped to [0, 1].
inline double sample_noisy_transmission(double transmission, double slope, double sigma,
                                        NoiseStream& stream) {
  require(sigma >= 0.0, ErrorKind::invalid_parameter, "noise sigma must be non-negative");
  if (sigma == 0.0) return transmission;
  return transmission + slope * sigma * stream.standard_normal();
}

}  // namespace rydberg
