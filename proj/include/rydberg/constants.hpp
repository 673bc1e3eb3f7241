#pragma once

#include <numbers>

namespace rydberg::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018.
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double speed_of_light = 299792458.0;    // m/s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_radius = 5.29177210903e-11;  // m
inline constexpr double atomic_dipole = 8.4783536255e-30;  // e*a0 in C*m

// Free-space impedance as used by the link budget (rounded, not mu0*c).
inline constexpr double free_space_impedance = 377.0;  // ohm

}  // namespace rydberg::constants
