#pragma once

// Closed-form probe coherence in the weak-probe limit (rho_11 ~ 1, Rydberg
// populations and Rydberg-Rydberg coherences neglected).
//
// Three evaluations are provided:
//   rho21_exact_weakprobe          nested continued fraction over all four couplings
//   solve_weakprobe_linear_system  the underlying 4x4 linear system, solved directly
//   rho21_stark_approx             interference branch replaced by an AC Stark shift
//                                  of the RF detuning, D'_RF = D_RF - Omega_I^2 / (4 D_I)
// The 4x4 solve is the reference for the fraction; both are kept so that a
// transcription error in either shows up as a disagreement.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "rydberg/error.hpp"
#include "rydberg/quantum_core.hpp"

namespace rydberg {

using cplx = std::complex<double>;

/// Denominators smaller than this (rad/s) are treated as zero.
inline constexpr double kDenominatorFloor = 1e-30;

struct WeakProbeResult {
  cplx rho21;
  double effective_rf_detuning = 0.0;  ///< D'_RF, rad/s
};

struct WeakProbeCoherences {
  cplx rho21;
  cplx rho31;
  cplx rho41;
  cplx rho51;
};

namespace detail {

/// Diagonal terms -i(cumulative detuning) + gamma_{k1} of the weak-probe system.
struct WeakProbeDiagonal {
  cplx d2, d3, d4, d5;
};

inline WeakProbeDiagonal weakprobe_diagonal(const DriveSet& drives, const DecaySpec& decays) {
  const double s2 = drives.probe_detuning;
  const double s3 = s2 + drives.coupling_detuning;
  const double s4 = s3 + drives.rf_detuning;
  const double s5 = s4 + drives.interference_detuning;
  return {cplx(decays.gamma_pair(1, 0), -s2), cplx(decays.gamma_pair(2, 0), -s3),
          cplx(decays.gamma_pair(3, 0), -s4), cplx(decays.gamma_pair(4, 0), -s5)};
}

/// outer - (i Omega / 2)^2 / inner. A zero coupling truncates the nesting
/// without touching `inner`.
inline cplx nest(cplx outer, double rabi, cplx inner, const char* level) {
  if (rabi == 0.0) return outer;
  if (std::abs(inner) < kDenominatorFloor)
    fail(ErrorKind::singularity, std::string("weak-probe denominator vanishes at level ") + level);
  const cplx half_i_rabi(0.0, 0.5 * rabi);
  return outer - half_i_rabi * half_i_rabi / inner;
}

inline cplx probe_response(double probe_rabi, cplx denominator) {
  if (std::abs(denominator) < kDenominatorFloor)
    fail(ErrorKind::singularity, "weak-probe denominator vanishes at level 2");
  return -cplx(0.0, 0.5 * probe_rabi) / denominator;
}

}  // namespace detail

/// Continued-fraction rho_21 with all four couplings.
inline cplx rho21_exact_weakprobe(const DriveSet& drives, const DecaySpec& decays) {
  drives.validate();
  decays.validate();
  const auto d = detail::weakprobe_diagonal(drives, decays);
  // Inner levels are only evaluated when the coupling to them is non-zero, so an
  // uncoupled branch can never raise (or perturb) anything.
  cplx level3 = d.d3;
  if (drives.rf_rabi != 0.0) {
    const cplx level4 = detail::nest(d.d4, drives.interference_rabi, d.d5, "5");
    level3 = detail::nest(d.d3, drives.rf_rabi, level4, "4");
  }
  cplx level2 = d.d2;
  if (drives.coupling_rabi != 0.0) level2 = detail::nest(d.d2, drives.coupling_rabi, level3, "3");
  return detail::probe_response(drives.probe_rabi, level2);
}

/// Omega_I^2 / (4 Delta_I): the amount subtracted from the RF detuning.
inline double ac_stark_shift(double interference_rabi, double interference_detuning) {
  if (interference_detuning == 0.0)
    fail(ErrorKind::singularity, "AC Stark shift undefined for resonant interference");
  return interference_rabi * interference_rabi / (4.0 * interference_detuning);
}

inline WeakProbeResult rho21_stark_approx(const DriveSet& drives, const DecaySpec& decays) {
  drives.validate();
  decays.validate();
  const double shift = ac_stark_shift(drives.interference_rabi, drives.interference_detuning);
  const double effective_rf = drives.rf_detuning - shift;
  const double s4 = drives.probe_detuning + drives.coupling_detuning + effective_rf;
  const auto d = detail::weakprobe_diagonal(drives, decays);
  cplx level3 = d.d3;
  if (drives.rf_rabi != 0.0)
    level3 = detail::nest(d.d3, drives.rf_rabi, cplx(decays.gamma_pair(3, 0), -s4), "4");
  cplx level2 = d.d2;
  if (drives.coupling_rabi != 0.0) level2 = detail::nest(d.d2, drives.coupling_rabi, level3, "3");
  return {detail::probe_response(drives.probe_rabi, level2), effective_rf};
}

/// Direct solve of the four steady-state equations for rho_21, rho_31, rho_41, rho_51.
inline WeakProbeCoherences solve_weakprobe_linear_system(const DriveSet& drives,
                                                         const DecaySpec& decays) {
  drives.validate();
  decays.validate();
  const auto d = detail::weakprobe_diagonal(drives, decays);
  const cplx ic(0.0, 0.5 * drives.coupling_rabi);
  const cplx irf(0.0, 0.5 * drives.rf_rabi);
  const cplx ii(0.0, 0.5 * drives.interference_rabi);

  Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
  a(0, 0) = d.d2; a(0, 1) = ic;
  a(1, 0) = ic;   a(1, 1) = d.d3; a(1, 2) = irf;
  a(2, 1) = irf;  a(2, 2) = d.d4; a(2, 3) = ii;
  a(3, 2) = ii;   a(3, 3) = d.d5;
  Eigen::Vector4cd b = Eigen::Vector4cd::Zero();
  b(0) = -cplx(0.0, 0.5 * drives.probe_rabi);

  Eigen::FullPivLU<Eigen::Matrix4cd> lu(a);
  if (!lu.isInvertible()) fail(ErrorKind::singularity, "weak-probe linear system is singular");
  const Eigen::Vector4cd x = lu.solve(b);
  return {x(0), x(1), x(2), x(3)};
}

}  // namespace rydberg
