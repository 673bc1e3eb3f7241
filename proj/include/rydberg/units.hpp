#pragma once

// Quantity strings of the form "<number> <unit>", e.g. "7 uV/cm", "-31 GHz".
//
// Two frequency-like dimensions are kept apart on purpose:
//   angular_rate  Hz-family units are multiplied by 2*pi ("6 MHz" -> 2*pi*6e6 rad/s)
//   frequency     carrier frequencies stay in Hz; "rad/s" is divided by 2*pi
// Internally everything is SI with angular quantities in rad/s.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

#include "rydberg/constants.hpp"
#include "rydberg/error.hpp"

namespace rydberg::units {

enum class Dimension {
  dimensionless,
  angular_rate,
  frequency,
  electric_field,
  dipole_moment,
  length,
  time,
  number_density,
  temperature,
  decibel,
  percent,
  impedance,
};

struct UnitEntry {
  std::string_view symbol;
  double factor;
};

namespace detail {

inline constexpr std::array angular_units{
    UnitEntry{"rad/s", 1.0},
    UnitEntry{"Hz", constants::two_pi},
    UnitEntry{"kHz", constants::two_pi * 1e3},
    UnitEntry{"MHz", constants::two_pi * 1e6},
    UnitEntry{"GHz", constants::two_pi * 1e9},
};

inline constexpr std::array frequency_units{
    UnitEntry{"Hz", 1.0},
    UnitEntry{"kHz", 1e3},
    UnitEntry{"MHz", 1e6},
    UnitEntry{"GHz", 1e9},
    UnitEntry{"rad/s", 1.0 / constants::two_pi},
};

inline constexpr std::array field_units{
    UnitEntry{"V/m", 1.0},
    UnitEntry{"kV/m", 1e3},
    UnitEntry{"mV/m", 1e-3},
    UnitEntry{"uV/m", 1e-6},
    UnitEntry{"V/cm", 1e2},
    UnitEntry{"mV/cm", 1e-1},
    UnitEntry{"uV/cm", 1e-4},
    UnitEntry{"\xC2\xB5V/cm", 1e-4},  // micro sign
    UnitEntry{"\xCE\xBCV/cm", 1e-4},  // greek mu
    UnitEntry{"nV/cm", 1e-7},
};

inline constexpr std::array dipole_units{
    UnitEntry{"C*m", 1.0},
    UnitEntry{"C m", 1.0},
    UnitEntry{"Cm", 1.0},
    UnitEntry{"ea0", constants::atomic_dipole},
};

inline constexpr std::array length_units{
    UnitEntry{"m", 1.0},
    UnitEntry{"cm", 1e-2},
    UnitEntry{"mm", 1e-3},
    UnitEntry{"um", 1e-6},
    UnitEntry{"nm", 1e-9},
};

inline constexpr std::array time_units{
    UnitEntry{"s", 1.0},
    UnitEntry{"ms", 1e-3},
    UnitEntry{"us", 1e-6},
    UnitEntry{"\xC2\xB5s", 1e-6},
    UnitEntry{"ns", 1e-9},
};

inline constexpr std::array density_units{
    UnitEntry{"m^-3", 1.0},
    UnitEntry{"cm^-3", 1e6},
};

inline constexpr std::array temperature_units{UnitEntry{"K", 1.0}};
inline constexpr std::array decibel_units{UnitEntry{"dB", 1.0}};
inline constexpr std::array percent_units{UnitEntry{"%", 1.0}};
inline constexpr std::array impedance_units{UnitEntry{"ohm", 1.0}, UnitEntry{"Ohm", 1.0}};

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

template <std::size_t N>
bool lookup(const std::array<UnitEntry, N>& table, std::string_view symbol, double& factor) {
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const UnitEntry& e) { return e.symbol == symbol; });
  if (it == table.end()) return false;
  factor = it->factor;
  return true;
}

}  // namespace detail

inline std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::angular_rate: return "angular rate";
    case Dimension::frequency: return "frequency";
    case Dimension::electric_field: return "electric field";
    case Dimension::dipole_moment: return "dipole moment";
    case Dimension::length: return "length";
    case Dimension::time: return "time";
    case Dimension::number_density: return "number density";
    case Dimension::temperature: return "temperature";
    case Dimension::decibel: return "decibel";
    case Dimension::percent: return "percent";
    case Dimension::impedance: return "impedance";
  }
  return "unknown";
}

/// Canonical unit written by format_quantity; parse_quantity accepts it with factor 1.
inline std::string_view canonical_unit(Dimension d) {
  switch (d) {
    case Dimension::dimensionless: return "";
    case Dimension::angular_rate: return "rad/s";
    case Dimension::frequency: return "Hz";
    case Dimension::electric_field: return "V/m";
    case Dimension::dipole_moment: return "C*m";
    case Dimension::length: return "m";
    case Dimension::time: return "s";
    case Dimension::number_density: return "m^-3";
    case Dimension::temperature: return "K";
    case Dimension::decibel: return "dB";
    case Dimension::percent: return "%";
    case Dimension::impedance: return "ohm";
  }
  return "";
}

/// Returns the SI conversion factor for `symbol`, or throws parse error.
inline double unit_factor(Dimension d, std::string_view symbol) {
  using namespace detail;
  double factor = 0.0;
  bool found = false;
  switch (d) {
    case Dimension::dimensionless: found = symbol.empty(); factor = 1.0; break;
    case Dimension::angular_rate: found = lookup(angular_units, symbol, factor); break;
    case Dimension::frequency: found = lookup(frequency_units, symbol, factor); break;
    case Dimension::electric_field: found = lookup(field_units, symbol, factor); break;
    case Dimension::dipole_moment: found = lookup(dipole_units, symbol, factor); break;
    case Dimension::length: found = lookup(length_units, symbol, factor); break;
    case Dimension::time: found = lookup(time_units, symbol, factor); break;
    case Dimension::number_density: found = lookup(density_units, symbol, factor); break;
    case Dimension::temperature: found = lookup(temperature_units, symbol, factor); break;
    case Dimension::decibel: found = lookup(decibel_units, symbol, factor); break;
    case Dimension::percent: found = lookup(percent_units, symbol, factor); break;
    case Dimension::impedance: found = lookup(impedance_units, symbol, factor); break;
  }
  if (!found) {
    if (symbol.empty())
      fail(ErrorKind::parse, "missing unit (expected " + std::string(to_string(d)) + ")");
    fail(ErrorKind::parse, "unknown " + std::string(to_string(d)) + " unit '" +
                               std::string(symbol) + "'");
  }
  return factor;
}

/// Parses "<number>[ ]<unit>" into SI. The unit is mandatory except for
/// dimensionless quantities.
inline double parse_quantity(std::string_view text, Dimension d) {
  const auto s = detail::trim(text);
  if (s.empty()) fail(ErrorKind::parse, "empty quantity");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr == s.data())
    fail(ErrorKind::parse, "expected a number in '" + std::string(s) + "'");
  const auto unit = detail::trim(s.substr(static_cast<std::size_t>(ptr - s.data())));
  const double factor = unit_factor(d, unit);
  const double si = value * factor;
  if (!std::isfinite(si)) fail(ErrorKind::parse, "non-finite quantity '" + std::string(s) + "'");
  return si;
}

/// Shortest round-trip decimal representation.
inline std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

/// Formats an SI value in the canonical unit so that parse_quantity returns it bit-exactly.
inline std::string format_quantity(double si, Dimension d) {
  const auto unit = canonical_unit(d);
  if (unit.empty()) return format_number(si);
  return format_number(si) + " " + std::string(unit);
}

}  // namespace rydberg::units
