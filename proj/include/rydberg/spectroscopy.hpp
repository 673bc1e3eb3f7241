#pragma once

// Probe transmission (Beer-Lambert), coupling-detuning sweeps and the two
// readouts taken from a sweep: the amplitude-regime extremum between the
// Autler-Townes peaks and the frequency-regime peak separation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rydberg/constants.hpp"
#include "rydberg/error.hpp"
#include "rydberg/ladder.hpp"
#include "rydberg/parallel.hpp"
#include "rydberg/units.hpp"

namespace rydberg {

/// T = exp[4 pi N L |mu_21|^2 / (hbar eps0 lambda_p Omega_p) * Im(rho_21)].
inline double beer_lambert_transmission(std::complex<double> rho21, const CellSpec& cell,
                                        double probe_rabi) {
  cell.validate();
  require(std::isfinite(probe_rabi) && probe_rabi > 0.0, ErrorKind::invalid_parameter,
          "probe Rabi frequency must be positive");
  if (!(rho21.imag() <= 1e-9))
    fail(ErrorKind::invalid_coherence,
         "Im(rho_21) = " + std::to_string(rho21.imag()) + " > 0: gain is outside the model");
  const double prefactor = 4.0 * constants::pi * cell.atomic_density * cell.cell_length *
                           cell.probe_dipole * cell.probe_dipole /
                           (constants::hbar * constants::vacuum_permittivity *
                            cell.probe_wavelength * probe_rabi);
  return std::exp(prefactor * rho21.imag());
}

inline double probe_transmission(const LadderConfig& config, Engine engine) {
  const auto rho21 = probe_coherence(config, engine);
  return beer_lambert_transmission(rho21, config.cell(), config.drives().probe_rabi);
}

/// Noiseless transmission at a coupling detuning and RF field amplitude.
inline double transmission_at(const LadderConfig& config, double delta_c, double e_rf,
                              Engine engine) {
  return probe_transmission(config.with_coupling_detuning(delta_c).with_rf_field(e_rf), engine);
}

struct SpectrumSample {
  double delta_c = 0.0;       ///< coupling detuning, rad/s
  double transmission = 0.0;  ///< dimensionless
  bool operator==(const SpectrumSample&) const = default;
};

/// Transmission sampled on a strictly increasing coupling-detuning grid.
///
/// Transmissions lie in (0, 1]; an exact 0 can only come from exp() underflow
/// deep in an absorption line and is tolerated.
struct SpectrumTrace {
  std::vector<SpectrumSample> samples;

  std::size_t size() const { return samples.size(); }

  void validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      require(std::isfinite(s.delta_c), ErrorKind::invalid_parameter, "non-finite detuning");
      require(s.transmission >= 0.0 && s.transmission <= 1.0, ErrorKind::invalid_parameter,
              "transmission outside [0, 1]");
      if (i > 0)
        require(samples[i - 1].delta_c < s.delta_c, ErrorKind::invalid_parameter,
                "trace detunings must be strictly increasing");
    }
  }

  bool operator==(const SpectrumTrace&) const = default;
};

/// `points` evenly spaced values from `first` to `last` inclusive.
inline std::vector<double> linear_grid(double first, double last, std::size_t points) {
  require(points >= 1, ErrorKind::invalid_parameter, "grid needs at least one point");
  require(std::isfinite(first) && std::isfinite(last), ErrorKind::invalid_parameter,
          "grid bounds must be finite");
  if (points == 1) return {first};
  require(first < last, ErrorKind::invalid_parameter, "grid bounds must be increasing");
  std::vector<double> grid(points);
  const double span = last - first;
  const auto intervals = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = first + span * (static_cast<double>(i) / intervals);
  grid.back() = last;
  return grid;
}

/// One transmission per grid point. Points are independent and evaluated in
/// parallel; the result is identical for any thread count.
inline SpectrumTrace sweep_spectrum(const LadderConfig& config,
                                    const std::vector<double>& delta_c_grid, Engine engine,
                                    unsigned threads = 0) {
  require(!delta_c_grid.empty(), ErrorKind::usage, "detuning grid is empty");
  for (std::size_t i = 1; i < delta_c_grid.size(); ++i)
    require(delta_c_grid[i - 1] < delta_c_grid[i], ErrorKind::invalid_parameter,
            "detuning grid must be strictly increasing");
  config.validate();

  SpectrumTrace trace;
  trace.samples.resize(delta_c_grid.size());
  parallel_for(
      delta_c_grid.size(),
      [&](std::size_t i) {
        const double dc = delta_c_grid[i];
        try {
          trace.samples[i] = {dc, probe_transmission(config.with_coupling_detuning(dc), engine)};
        } catch (const Error& e) {
          throw Error(e.kind(), "at delta_c = " + units::format_number(dc) + " rad/s: " + e.what());
        }
      },
      threads);
  return trace;
}

struct Extremum {
  double delta_c = 0.0;       ///< rad/s
  double transmission = 0.0;
};

namespace detail {

/// Vertex of the parabola through three points; falls back to the middle
/// point when the samples are collinear.
inline Extremum parabolic_vertex(const SpectrumSample& a, const SpectrumSample& b,
                                 const SpectrumSample& c) {
  const double x0 = a.delta_c, x1 = b.delta_c, x2 = c.delta_c;
  const double y0 = a.transmission, y1 = b.transmission, y2 = c.transmission;
  const double p = (x1 - x0) * (y1 - y2);
  const double q = (x1 - x2) * (y1 - y0);
  const double denom = p - q;
  if (denom == 0.0) return {x1, y1};
  double xv = x1 - 0.5 * ((x1 - x0) * p - (x1 - x2) * q) / denom;
  xv = std::clamp(xv, x0, x2);
  // Lagrange form evaluated at the vertex.
  const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
  return {xv, l0 * y0 + l1 * y1 + l2 * y2};
}

inline Extremum refine(const SpectrumTrace& trace, std::size_t i) {
  const auto& s = trace.samples;
  if (i == 0 || i + 1 >= s.size()) return {s[i].delta_c, s[i].transmission};
  return parabolic_vertex(s[i - 1], s[i], s[i + 1]);
}

inline std::vector<std::size_t> interior_maxima(const SpectrumTrace& trace) {
  const auto& s = trace.samples;
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < s.size(); ++i)
    if (s[i].transmission > s[i - 1].transmission && s[i].transmission >= s[i + 1].transmission)
      peaks.push_back(i);
  return peaks;
}

/// The two highest candidates; equal heights are resolved towards the widest pair.
inline std::pair<std::size_t, std::size_t> main_peak_pair(const SpectrumTrace& trace,
                                                          const std::vector<std::size_t>& peaks) {
  const auto& s = trace.samples;
  std::pair<std::size_t, std::size_t> best{peaks[0], peaks[1]};
  auto key = [&](std::size_t a, std::size_t b) {
    const double ya = s[a].transmission, yb = s[b].transmission;
    return std::tuple{std::min(ya, yb), std::max(ya, yb), std::abs(s[a].delta_c - s[b].delta_c)};
  };
  for (std::size_t i = 0; i < peaks.size(); ++i)
    for (std::size_t j = i + 1; j < peaks.size(); ++j)
      if (key(peaks[i], peaks[j]) > key(best.first, best.second)) best = {peaks[i], peaks[j]};
  if (best.first > best.second) std::swap(best.first, best.second);
  return best;
}

}  // namespace detail

/// Transmission minimum between the two main peaks (amplitude-regime readout
/// point). Trace ends count as peaks when the trace rises towards them.
inline Extremum find_amplitude_extremum(const SpectrumTrace& trace) {
  require(trace.size() >= 3, ErrorKind::invalid_parameter,
          "extremum search needs at least 3 samples");
  const auto& s = trace.samples;
  std::vector<std::size_t> peaks;
  if (s[0].transmission > s[1].transmission) peaks.push_back(0);
  for (auto i : detail::interior_maxima(trace)) peaks.push_back(i);
  if (s[s.size() - 1].transmission > s[s.size() - 2].transmission) peaks.push_back(s.size() - 1);
  if (peaks.size() < 2) fail(ErrorKind::no_splitting, "trace has no interior extremum");

  const auto [left, right] = detail::main_peak_pair(trace, peaks);
  std::size_t lowest = left + 1;
  for (std::size_t i = left + 1; i < right; ++i)
    if (s[i].transmission < s[lowest].transmission) lowest = i;
  if (lowest >= right ||
      !(s[lowest].transmission < std::min(s[left].transmission, s[right].transmission)))
    fail(ErrorKind::no_splitting, "no transmission minimum between the main peaks");
  return detail::refine(trace, lowest);
}

/// Distance between the two highest interior transmission maxima, rad/s.
inline double find_ats_splitting(const SpectrumTrace& trace) {
  require(trace.size() >= 5, ErrorKind::invalid_parameter,
          "splitting search needs at least 5 samples");
  const auto peaks = detail::interior_maxima(trace);
  if (peaks.size() < 2) fail(ErrorKind::no_splitting, "fewer than two transmission maxima");
  const auto [left, right] = detail::main_peak_pair(trace, peaks);
  return detail::refine(trace, right).delta_c - detail::refine(trace, left).delta_c;
}

}  // namespace rydberg
