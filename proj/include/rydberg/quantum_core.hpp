#pragma once

// Five-level ladder: interaction matrix, cascade decay map, Lindblad right-hand
// side, steady state and an RK4 propagator used as an independent check of the
// steady state.
//
// Level indices are 0-based in code: level 0 is the ground state |1>, so the
// probe coherence rho_21 is elements(1, 0).
//
// The solver templates are generic in the number of levels N and the real
// scalar type; the physical scenario instantiates N = 5, Real = double.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "rydberg/constants.hpp"
#include "rydberg/error.hpp"

namespace rydberg {

inline constexpr int kLevels = 5;

template <class Real, int N>
using RealMatrix = Eigen::Matrix<Real, N, N>;

template <class Real, int N>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, N, N>;

/// Ladder transition dipole moments (C*m) and the probe wavelength (m).
///
/// Only ladder-adjacent transitions carry a dipole moment:
/// dipole_moments[k] belongs to the transition between levels k and k+1
/// (0-based), i.e. mu_21, mu_32, mu_43, mu_54.
struct LevelScheme {
  std::array<double, kLevels - 1> dipole_moments{};
  double probe_wavelength = 0.0;

  static constexpr int n_levels = kLevels;

  double dipole(int lower, int upper) const {
    if (lower > upper) std::swap(lower, upper);
    if (lower < 0 || upper >= kLevels || upper != lower + 1)
      fail(ErrorKind::invalid_parameter,
           "no dipole moment for non-adjacent transition " + std::to_string(lower + 1) + "-" +
               std::to_string(upper + 1));
    return dipole_moments[static_cast<std::size_t>(lower)];
  }

  void validate() const {
    for (std::size_t k = 0; k < dipole_moments.size(); ++k) {
      const double mu = dipole_moments[k];
      require(std::isfinite(mu) && mu > 0.0, ErrorKind::invalid_parameter,
              "dipole moment " + std::to_string(k + 1) + "-" + std::to_string(k + 2) +
                  " must be positive and finite");
    }
    require(std::isfinite(probe_wavelength) && probe_wavelength > 0.0,
            ErrorKind::invalid_parameter, "probe wavelength must be positive and finite");
  }

  bool operator==(const LevelScheme&) const = default;
};

/// Rabi frequencies and detunings of the four ladder drives, rad/s.
struct DriveSet {
  double probe_rabi = 0.0;
  double coupling_rabi = 0.0;
  double rf_rabi = 0.0;
  double interference_rabi = 0.0;

  double probe_detuning = 0.0;
  double coupling_detuning = 0.0;
  double rf_detuning = 0.0;
  double interference_detuning = 0.0;

  std::array<double, 4> rabi() const {
    return {probe_rabi, coupling_rabi, rf_rabi, interference_rabi};
  }
  std::array<double, 4> detunings() const {
    return {probe_detuning, coupling_detuning, rf_detuning, interference_detuning};
  }

  void validate() const {
    for (double r : rabi())
      require(std::isfinite(r) && r >= 0.0, ErrorKind::invalid_parameter,
              "Rabi frequencies must be finite and non-negative");
    for (double d : detunings())
      require(std::isfinite(d), ErrorKind::invalid_parameter, "detunings must be finite");
  }

  bool operator==(const DriveSet&) const = default;
};

/// Population decay rates Gamma_1..Gamma_N (rad/s). Level k decays into k-1.
template <int N>
struct BasicDecaySpec {
  std::array<double, N> level_rates{};

  /// Decoherence rate gamma_ij = (Gamma_i + Gamma_j) / 2.
  double gamma_pair(int i, int j) const {
    return 0.5 * (level_rates[static_cast<std::size_t>(i)] + level_rates[static_cast<std::size_t>(j)]);
  }

  double max_rate() const { return *std::max_element(level_rates.begin(), level_rates.end()); }

  void validate() const {
    require(level_rates[0] == 0.0, ErrorKind::invalid_parameter,
            "ground-state decay rate Gamma_1 must be zero");
    for (double g : level_rates)
      require(std::isfinite(g) && g >= 0.0, ErrorKind::invalid_parameter,
              "decay rates must be finite and non-negative");
  }

  bool operator==(const BasicDecaySpec&) const = default;
};

using DecaySpec = BasicDecaySpec<kLevels>;

template <class Real, int N>
struct BasicDensityMatrix {
  ComplexMatrix<Real, N> elements = ComplexMatrix<Real, N>::Zero();

  static BasicDensityMatrix pure_level(int level) {
    BasicDensityMatrix rho;
    rho.elements(level, level) = Real(1);
    return rho;
  }
  static BasicDensityMatrix ground_state() { return pure_level(0); }

  std::complex<Real> operator()(int i, int j) const { return elements(i, j); }

  /// rho_21 in 1-based notation.
  std::complex<Real> probe_coherence() const { return elements(1, 0); }

  std::complex<Real> trace() const { return elements.trace(); }

  Real hermiticity_error() const {
    return (elements - elements.adjoint()).cwiseAbs().maxCoeff();
  }

  void validate(Real tolerance = Real(1e-10)) const {
    require(elements.allFinite(), ErrorKind::invalid_parameter,
            "density matrix has non-finite entries");
    require(hermiticity_error() <= tolerance, ErrorKind::invalid_parameter,
            "density matrix is not Hermitian");
    require(std::abs(trace() - std::complex<Real>(1)) <= tolerance,
            ErrorKind::invalid_parameter, "density matrix trace differs from 1");
    for (int k = 0; k < N; ++k) {
      const auto d = elements(k, k);
      require(std::abs(d.imag()) <= tolerance && d.real() >= -tolerance &&
                  d.real() <= Real(1) + tolerance,
              ErrorKind::invalid_parameter, "density matrix population outside [0, 1]");
    }
  }
};

using DensityMatrix = BasicDensityMatrix<double, kLevels>;

/// Omega = mu * E / hbar.
inline double rabi_from_field(double dipole_moment, double field_amplitude) {
  require(std::isfinite(dipole_moment) && dipole_moment > 0.0, ErrorKind::invalid_parameter,
          "dipole moment must be positive and finite");
  require(std::isfinite(field_amplitude) && field_amplitude >= 0.0,
          ErrorKind::invalid_parameter, "field amplitude must be finite and non-negative");
  return dipole_moment * field_amplitude / constants::hbar;
}

/// Ladder interaction matrix M (H = hbar/2 M): couplings on the first off-diagonals,
/// diagonal entries -2 * cumulative detuning.
template <class Real, std::size_t Couplings>
RealMatrix<Real, static_cast<int>(Couplings) + 1> ladder_interaction_matrix(
    const std::array<Real, Couplings>& rabi, const std::array<Real, Couplings>& detunings) {
  constexpr int N = static_cast<int>(Couplings) + 1;
  RealMatrix<Real, N> m = RealMatrix<Real, N>::Zero();
  Real cumulative(0);
  for (int k = 0; k < N - 1; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    m(k, k + 1) = rabi[idx];
    m(k + 1, k) = rabi[idx];
    cumulative += detunings[idx];
    m(k + 1, k + 1) = Real(-2) * cumulative;
  }
  return m;
}

inline RealMatrix<double, kLevels> build_interaction_matrix(const DriveSet& drives) {
  drives.validate();
  return ladder_interaction_matrix<double, 4>(drives.rabi(), drives.detunings());
}

/// Cascade decay map L(rho): diagonal Gamma_{k+1} rho_{k+1,k+1} - Gamma_k rho_kk,
/// off-diagonal -gamma_ij rho_ij.
template <class Real, int N>
ComplexMatrix<Real, N> decay_map(const ComplexMatrix<Real, N>& rho,
                                 const BasicDecaySpec<N>& decays) {
  ComplexMatrix<Real, N> out;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i != j) out(i, j) = -static_cast<Real>(decays.gamma_pair(i, j)) * rho(i, j);
    }
  }
  for (int k = 0; k < N; ++k) {
    const auto gk = static_cast<Real>(decays.level_rates[static_cast<std::size_t>(k)]);
    std::complex<Real> d = -gk * rho(k, k);
    if (k + 1 < N) {
      const auto gup = static_cast<Real>(decays.level_rates[static_cast<std::size_t>(k + 1)]);
      d += gup * rho(k + 1, k + 1);
    }
    out(k, k) = d;
  }
  return out;
}

template <class Real, int N>
ComplexMatrix<Real, N> decay_map(const BasicDensityMatrix<Real, N>& rho,
                                 const BasicDecaySpec<N>& decays) {
  return decay_map<Real, N>(rho.elements, decays);
}

/// drho/dt = -(i/2)(M rho - rho M) + L(rho).
template <class Real, int N>
ComplexMatrix<Real, N> master_rhs(const ComplexMatrix<Real, N>& rho,
                                  const RealMatrix<Real, N>& m,
                                  const BasicDecaySpec<N>& decays) {
  const ComplexMatrix<Real, N> mc = m.template cast<std::complex<Real>>();
  const std::complex<Real> minus_half_i(Real(0), Real(-0.5));
  ComplexMatrix<Real, N> out = minus_half_i * (mc * rho - rho * mc);
  out += decay_map<Real, N>(rho, decays);
  return out;
}

template <class Real, int N>
ComplexMatrix<Real, N> master_rhs(const BasicDensityMatrix<Real, N>& rho,
                                  const RealMatrix<Real, N>& m,
                                  const BasicDecaySpec<N>& decays) {
  return master_rhs<Real, N>(rho.elements, m, decays);
}

template <class Real, int N>
using Superoperator = Eigen::Matrix<std::complex<Real>, N * N, N * N>;

template <class Real, int N>
using VectorizedState = Eigen::Matrix<std::complex<Real>, N * N, 1>;

/// Row-major vectorization: rho(i, j) -> v[i * N + j].
template <class Real, int N>
VectorizedState<Real, N> vectorize(const ComplexMatrix<Real, N>& rho) {
  VectorizedState<Real, N> v;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) v(i * N + j) = rho(i, j);
  return v;
}

template <class Real, int N>
ComplexMatrix<Real, N> unvectorize(const VectorizedState<Real, N>& v) {
  ComplexMatrix<Real, N> rho;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) rho(i, j) = v(i * N + j);
  return rho;
}

/// Matrix of the (complex-linear) master-equation right-hand side acting on vectorize(rho).
template <class Real, int N>
Superoperator<Real, N> liouvillian(const RealMatrix<Real, N>& m,
                                   const BasicDecaySpec<N>& decays) {
  Superoperator<Real, N> op;
  for (int col = 0; col < N * N; ++col) {
    ComplexMatrix<Real, N> unit = ComplexMatrix<Real, N>::Zero();
    unit(col / N, col % N) = Real(1);
    op.col(col) = vectorize<Real, N>(master_rhs<Real, N>(unit, m, decays));
  }
  return op;
}

namespace detail {

template <class Real, int N>
ComplexMatrix<Real, N> hermitian_part(const ComplexMatrix<Real, N>& rho) {
  return Real(0.5) * (rho + rho.adjoint());
}

}  // namespace detail

/// Steady state of the master equation.
///
/// The N^2 unknowns are solved directly; the d(rho_11)/dt row, which is
/// redundant because the dynamics conserve the trace, is replaced by
/// sum_k rho_kk = 1.
template <class Real, int N>
BasicDensityMatrix<Real, N> steady_state(const RealMatrix<Real, N>& m,
                                         const BasicDecaySpec<N>& decays) {
  decays.validate();
  require(m.allFinite(), ErrorKind::invalid_parameter, "interaction matrix is not finite");
  if (decays.max_rate() <= 0.0)
    fail(ErrorKind::no_unique_steady_state, "all decay rates are zero: no unique steady state");

  Superoperator<Real, N> a = liouvillian<Real, N>(m, decays);
  // Scale the trace row like the rest of the system to keep pivoting balanced.
  const Real scale = std::max(a.cwiseAbs().maxCoeff(), Real(1));
  a.row(0).setZero();
  VectorizedState<Real, N> b = VectorizedState<Real, N>::Zero();
  for (int k = 0; k < N; ++k) a(0, k * N + k) = scale;
  b(0) = scale;

  Eigen::FullPivLU<Superoperator<Real, N>> lu(a);
  if (!lu.isInvertible())
    fail(ErrorKind::no_unique_steady_state, "steady-state system is singular");

  VectorizedState<Real, N> x = lu.solve(b);
  const VectorizedState<Real, N> residual = b - a * x;
  x += lu.solve(residual);
  require(x.allFinite(), ErrorKind::no_unique_steady_state, "steady-state solve diverged");

  BasicDensityMatrix<Real, N> rho;
  rho.elements = detail::hermitian_part<Real, N>(unvectorize<Real, N>(x));
  return rho;
}

inline DensityMatrix steady_state(const DriveSet& drives, const DecaySpec& decays) {
  return steady_state<double, kLevels>(build_interaction_matrix(drives), decays);
}

enum class Propagation {
  automatic,  ///< stepwise for short runs, propagator doubling for long ones
  stepwise,   ///< apply one RK4 step at a time
  doubling,   ///< build the one-step RK4 propagator and apply its binary powers
};

/// Fixed-step classical RK4 integration of the master equation.
///
/// The step is shrunk so that an integer number of steps covers `duration`.
/// For long horizons the one-step propagator P = sum_{k<=4} (hA)^k / k! is
/// formed in extended precision and applied through its binary powers, which is
/// algebraically the same sequence of RK4 steps. Hermiticity is restored after
/// every applied step (stepwise) or power (doubling).
template <class Real, int N>
BasicDensityMatrix<Real, N> time_evolve(const BasicDensityMatrix<Real, N>& rho0,
                                        const RealMatrix<Real, N>& m,
                                        const BasicDecaySpec<N>& decays, double duration,
                                        double step,
                                        Propagation mode = Propagation::automatic) {
  decays.validate();
  require(std::isfinite(duration) && duration >= 0.0, ErrorKind::invalid_parameter,
          "duration must be finite and non-negative");
  require(std::isfinite(step) && step > 0.0, ErrorKind::invalid_parameter,
          "step must be positive");
  if (duration == 0.0) return rho0;

  const double steps_real = std::ceil(duration / step - 1e-9);
  require(steps_real < 9.0e18, ErrorKind::invalid_parameter, "too many integration steps");
  const auto n_steps = static_cast<std::uint64_t>(std::max(1.0, steps_real));
  const double h = duration / static_cast<double>(n_steps);

  if (mode == Propagation::automatic)
    mode = n_steps <= 100000 ? Propagation::stepwise : Propagation::doubling;

  auto check = [](const auto& rho) {
    if (!rho.allFinite() || rho.cwiseAbs().maxCoeff() > 2)
      fail(ErrorKind::step_too_large, "time integration became unstable; reduce the step");
  };

  if (mode == Propagation::stepwise) {
    ComplexMatrix<Real, N> rho = rho0.elements;
    const Real hh = static_cast<Real>(h);
    for (std::uint64_t s = 0; s < n_steps; ++s) {
      const auto k1 = master_rhs<Real, N>(rho, m, decays);
      const auto k2 = master_rhs<Real, N>(rho + (hh / 2) * k1, m, decays);
      const auto k3 = master_rhs<Real, N>(rho + (hh / 2) * k2, m, decays);
      const auto k4 = master_rhs<Real, N>(rho + hh * k3, m, decays);
      rho += (hh / 6) * (k1 + Real(2) * k2 + Real(2) * k3 + k4);
      rho = detail::hermitian_part<Real, N>(rho);
      check(rho);
    }
    BasicDensityMatrix<Real, N> out;
    out.elements = rho;
    return out;
  }

  using Wide = long double;
  const RealMatrix<Wide, N> mw = m.template cast<Wide>();
  const Superoperator<Wide, N> ha = static_cast<Wide>(h) * liouvillian<Wide, N>(mw, decays);
  // Horner form of I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24.
  const Superoperator<Wide, N> id = Superoperator<Wide, N>::Identity();
  Superoperator<Wide, N> power =
      id + ha * (id + ha * (id + ha * (id + ha / Wide(4)) / Wide(3)) / Wide(2));

  ComplexMatrix<Wide, N> rho = rho0.elements.template cast<std::complex<Wide>>();
  for (std::uint64_t remaining = n_steps;;) {
    if (remaining & 1u) {
      const VectorizedState<Wide, N> v = power * vectorize<Wide, N>(rho);
      rho = detail::hermitian_part<Wide, N>(unvectorize<Wide, N>(v));
      check(rho);
    }
    remaining >>= 1u;
    if (remaining == 0) break;
    power = (power * power).eval();
    if (!power.allFinite() || power.cwiseAbs().maxCoeff() > Wide(1e6))
      fail(ErrorKind::step_too_large, "RK4 propagator is unstable; reduce the step");
  }
  BasicDensityMatrix<Real, N> out;
  out.elements = rho.template cast<std::complex<Real>>();
  return out;
}

}  // namespace rydberg
