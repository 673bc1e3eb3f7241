#include <gtest/gtest.h>

#include <random>

#include "rydberg/constants.hpp"
#include "rydberg/quantum_core.hpp"
#include "test_support.hpp"

namespace {

using namespace rydberg;
using rydberg::testing::rel_err;
using rydberg::testing::thrown_kind;
using C = std::complex<double>;

constexpr double kTwoPi = constants::two_pi;

DecaySpec reference_decays() {
  return DecaySpec{{0.0, kTwoPi * 6e6, kTwoPi * 3e3, kTwoPi * 2e3, kTwoPi * 2e3}};
}

DensityMatrix random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix<double, kLevels> a;
  for (int i = 0; i < kLevels; ++i)
    for (int j = 0; j < kLevels; ++j) a(i, j) = C(n(rng), n(rng));
  ComplexMatrix<double, kLevels> rho = a * a.adjoint();
  rho /= rho.trace();
  DensityMatrix out;
  out.elements = rho;
  return out;
}

DriveSet random_drives(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rabi(0.0, kTwoPi * 10e6);
  std::uniform_real_distribution<double> det(-kTwoPi * 50e6, kTwoPi * 50e6);
  DriveSet d;
  d.probe_rabi = rabi(rng);
  d.coupling_rabi = rabi(rng);
  d.rf_rabi = rabi(rng);
  d.interference_rabi = rabi(rng);
  d.probe_detuning = det(rng);
  d.coupling_detuning = det(rng);
  d.rf_detuning = det(rng);
  d.interference_detuning = det(rng);
  return d;
}

TEST(QuantumCore, RabiFromFieldMatchesOracle) {
  const double mu21 = 2.98915 * constants::atomic_dipole;
  EXPECT_LT(rel_err(rabi_from_field(mu21, 1.0), 240316.21489523767), 1e-12);
  EXPECT_EQ(rabi_from_field(mu21, 0.0), 0.0);
  EXPECT_EQ(thrown_kind([&] { rabi_from_field(-mu21, 1.0); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(thrown_kind([&] { rabi_from_field(mu21, -1.0); }), ErrorKind::invalid_parameter);
}

TEST(QuantumCore, DipoleOnlyForAdjacentLevels) {
  LevelScheme s{{1.0, 2.0, 3.0, 4.0}, 780e-9};
  EXPECT_EQ(s.dipole(2, 3), 3.0);
  EXPECT_EQ(s.dipole(3, 2), 3.0);
  EXPECT_EQ(thrown_kind([&] { s.dipole(0, 2); }), ErrorKind::invalid_parameter);
}

TEST(QuantumCore, InteractionMatrixLayout) {
  DriveSet d{1.0, 2.0, 3.0, 4.0, 10.0, 20.0, 30.0, 40.0};
  const auto m = build_interaction_matrix(d);
  EXPECT_EQ(m(0, 1), 1.0);
  EXPECT_EQ(m(1, 0), 1.0);
  EXPECT_EQ(m(3, 4), 4.0);
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_EQ(m(1, 1), -20.0);
  EXPECT_EQ(m(2, 2), -60.0);
  EXPECT_EQ(m(3, 3), -120.0);
  EXPECT_EQ(m(4, 4), -200.0);
  EXPECT_EQ(m(0, 2), 0.0);
  EXPECT_TRUE(m.isApprox(m.transpose()));
}

TEST(QuantumCore, DecayMapConservesTraceAndHermiticity) {
  std::mt19937_64 rng(11);
  const auto decays = reference_decays();
  for (int t = 0; t < 50; ++t) {
    const auto rho = random_density(rng);
    const auto l = decay_map(rho, decays);
    EXPECT_LT(std::abs(l.trace()), 1e-6 * decays.max_rate());
    EXPECT_LT((l - l.adjoint()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(QuantumCore, DecayMapEntries) {
  DensityMatrix rho = DensityMatrix::pure_level(2);
  rho.elements(2, 1) = C(0.25, 0.5);
  rho.elements(1, 2) = std::conj(rho.elements(2, 1));
  const DecaySpec decays{{0.0, 4.0, 2.0, 1.0, 1.0}};
  const auto l = decay_map(rho, decays);
  EXPECT_DOUBLE_EQ(l(2, 2).real(), -2.0);
  EXPECT_DOUBLE_EQ(l(1, 1).real(), 2.0);
  EXPECT_EQ(l(2, 1), -3.0 * C(0.25, 0.5));
}

TEST(QuantumCore, MasterRhsIsTracelessAndHermitian) {
  std::mt19937_64 rng(12);
  const auto decays = reference_decays();
  for (int t = 0; t < 50; ++t) {
    const auto rho = random_density(rng);
    const auto m = build_interaction_matrix(random_drives(rng));
    const auto d = master_rhs(rho, m, decays);
    EXPECT_LT(std::abs(d.trace()), 1e-6 * (m.cwiseAbs().maxCoeff() + decays.max_rate()));
    EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff() /
                  (m.cwiseAbs().maxCoeff() + decays.max_rate()),
              1e-14);
  }
}

TEST(QuantumCore, VectorizationRoundTrips) {
  std::mt19937_64 rng(13);
  const auto rho = random_density(rng);
  const auto v = vectorize<double, kLevels>(rho.elements);
  EXPECT_EQ(v(1), rho.elements(0, 1));
  EXPECT_EQ(v(kLevels), rho.elements(1, 0));
  EXPECT_EQ((unvectorize<double, kLevels>(v)), rho.elements);
}

TEST(QuantumCore, LiouvillianReproducesMasterRhs) {
  std::mt19937_64 rng(14);
  const auto decays = reference_decays();
  const auto m = build_interaction_matrix(random_drives(rng));
  const auto a = liouvillian<double, kLevels>(m, decays);
  const auto rho = random_density(rng);
  const auto direct = master_rhs<double, kLevels>(rho.elements, m, decays);
  const auto via = unvectorize<double, kLevels>(a * vectorize<double, kLevels>(rho.elements));
  EXPECT_LT((direct - via).cwiseAbs().maxCoeff(), 1e-12 * direct.cwiseAbs().maxCoeff());
}

// Two-level limit: only the probe couples, so rho_22 and rho_21 follow the
// textbook saturation formulas.
TEST(QuantumCore, SteadyStateTwoLevelLimit) {
  const double gamma = kTwoPi * 6e6;
  for (double omega : {kTwoPi * 1e5, kTwoPi * 3e6, kTwoPi * 2e7}) {
    for (double delta : {0.0, kTwoPi * 2e6, -kTwoPi * 9e6}) {
      DriveSet d{};
      d.probe_rabi = omega;
      d.probe_detuning = delta;
      const DecaySpec decays{{0.0, gamma, 0.0, 0.0, 0.0}};
      // Levels 3..5 are uncoupled and undamped; give them a decay so the
      // steady state is unique.
      DecaySpec unique = decays;
      unique.level_rates[2] = unique.level_rates[3] = unique.level_rates[4] = 1.0;
      const auto rho = steady_state(d, unique);
      const double rho22 =
          (omega * omega / 4) / (delta * delta + gamma * gamma / 4 + omega * omega / 2);
      EXPECT_NEAR(rho(1, 1).real(), rho22, 1e-12);
      const C expected =
          C(0.0, 0.5) * omega * (1.0 - 2.0 * rho22) / C(-gamma / 2, delta);
      EXPECT_LT(rel_err(rho(1, 0), expected), 1e-9);
      EXPECT_NEAR(rho(2, 2).real(), 0.0, 1e-14);
    }
  }
}

TEST(QuantumCore, SteadyStateMatchesIndependentSolve) {
  // Reference operating point: 1 V/m probe, 80 kV/m coupling, 7 uV/cm RF,
  // 1 V/m interference at -31 GHz, coupling detuning 2 pi x 3 kHz.
  const double ea0 = constants::atomic_dipole;
  DriveSet d{};
  d.probe_rabi = rabi_from_field(2.98915 * ea0, 1.0);
  d.coupling_rabi = rabi_from_field(0.014396210727 * ea0, 8e4);
  d.rf_rabi = rabi_from_field(2291.3137043 * ea0, 7e-4);
  d.interference_rabi = rabi_from_field(1264.50275 * ea0, 1.0);
  d.coupling_detuning = kTwoPi * 3e3;
  d.interference_detuning = -kTwoPi * 31e9;
  const auto rho = steady_state(d, reference_decays());
  EXPECT_LT(rel_err(rho(1, 0), C(5.9285015502812971e-06, -1.9006723123651402e-06)), 1e-6);
  EXPECT_NEAR(rho(0, 0).real(), 0.9999671087111125, 1e-12);
  rho.validate(1e-10);
}

TEST(QuantumCore, SteadyStateIsAPhysicalState) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 30; ++t) {
    const auto rho = steady_state(random_drives(rng), reference_decays());
    EXPECT_NO_THROW(rho.validate(1e-9));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<double, kLevels>> es(rho.elements);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(QuantumCore, SteadyStateWithoutDecayIsRejected) {
  DriveSet d{};
  d.probe_rabi = 1.0;
  EXPECT_EQ(thrown_kind([&] { steady_state(d, DecaySpec{}); }), ErrorKind::no_unique_steady_state);
}

TEST(QuantumCore, DecaySpecRejectsGroundDecay) {
  DecaySpec d{{1.0, 1.0, 0.0, 0.0, 0.0}};
  EXPECT_EQ(thrown_kind([&] { d.validate(); }), ErrorKind::invalid_parameter);
}

TEST(QuantumCore, TimeEvolveZeroDurationIsIdentity) {
  std::mt19937_64 rng(16);
  const auto rho0 = random_density(rng);
  const auto m = build_interaction_matrix(random_drives(rng));
  const auto rho = time_evolve(rho0, m, reference_decays(), 0.0, 1e-9);
  EXPECT_EQ(rho.elements, rho0.elements);
}

TEST(QuantumCore, TimeEvolvePreservesTraceAndHermiticity) {
  std::mt19937_64 rng(17);
  const auto m = build_interaction_matrix(random_drives(rng));
  const auto rho =
      time_evolve(DensityMatrix::ground_state(), m, reference_decays(), 2e-6, 1e-10);
  EXPECT_NEAR(std::abs(rho.trace() - C(1.0)), 0.0, 1e-10);
  EXPECT_LT(rho.hermiticity_error(), 1e-14);
}

TEST(QuantumCore, DoublingEqualsStepping) {
  std::mt19937_64 rng(18);
  const auto m = build_interaction_matrix(random_drives(rng));
  const auto decays = reference_decays();
  const auto a = time_evolve(DensityMatrix::ground_state(), m, decays, 1e-6, 1e-10,
                             Propagation::stepwise);
  const auto b = time_evolve(DensityMatrix::ground_state(), m, decays, 1e-6, 1e-10,
                             Propagation::doubling);
  EXPECT_LT((a.elements - b.elements).cwiseAbs().maxCoeff(), 1e-11);
}

// Exact Rabi flopping for a resonant undamped two-level pair.
TEST(QuantumCore, TimeEvolveRabiOscillation) {
  using M2 = RealMatrix<double, 2>;
  const double omega = kTwoPi * 1e6;
  const M2 m = ladder_interaction_matrix<double, 1>({omega}, {0.0});
  const BasicDecaySpec<2> none{};
  const auto rho0 = BasicDensityMatrix<double, 2>::ground_state();
  for (double t : {0.1e-6, 0.25e-6, 0.5e-6}) {
    const auto rho = time_evolve(rho0, m, none, t, 1e-10);
    const double s = std::sin(omega * t / 2);
    EXPECT_NEAR(rho(1, 1).real(), s * s, 1e-10);
  }
}

TEST(QuantumCore, TimeEvolveReachesSteadyState) {
  DriveSet d{};
  d.probe_rabi = kTwoPi * 3e6;
  d.coupling_rabi = kTwoPi * 5e6;
  d.probe_detuning = kTwoPi * 1e6;
  const DecaySpec decays{{0.0, kTwoPi * 6e6, kTwoPi * 1e6, kTwoPi * 1e6, kTwoPi * 1e6}};
  const auto m = build_interaction_matrix(d);
  const auto ss = steady_state(m, decays);
  const auto rho = time_evolve(DensityMatrix::ground_state(), m, decays, 2e-5, 2e-10);
  EXPECT_LT((ss.elements - rho.elements).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(QuantumCore, TimeEvolveRejectsUnstableStep) {
  DriveSet d{};
  d.probe_rabi = kTwoPi * 1e6;
  const auto m = build_interaction_matrix(d);
  EXPECT_EQ(thrown_kind([&] {
              time_evolve(DensityMatrix::ground_state(), m, reference_decays(), 1e-4, 1e-6,
                          Propagation::stepwise);
            }),
            ErrorKind::step_too_large);
  EXPECT_EQ(thrown_kind([&] {
              time_evolve(DensityMatrix::ground_state(), m, reference_decays(), 1e-1, 1e-6,
                          Propagation::doubling);
            }),
            ErrorKind::step_too_large);
  EXPECT_EQ(thrown_kind([&] {
              time_evolve(DensityMatrix::ground_state(), m, reference_decays(), 1e-6, 0.0);
            }),
            ErrorKind::invalid_parameter);
}

}  // namespace
