#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rydberg/noise_model.hpp"
#include "test_support.hpp"

namespace {

using namespace rydberg;
using rydberg::testing::default_scenario;
using rydberg::testing::rel_err;
using rydberg::testing::thrown_kind;
constexpr double kShift = -13265.045213238122;

TEST(Noise, DephasingTimeAndProjectionLimit) {
  const auto& s = default_scenario();
  EXPECT_LT(rel_err(rf_dephasing_time(s.ladder.decays), 6.3661977236758134e-5), 1e-14);
  EXPECT_LT(rel_err(projection_min_field(s.noise), 1.9117666718152962e-6), 1e-12);
}

TEST(Noise, UncertaintyVarianceModels) {
  NoiseSpec spec = default_scenario().noise;
  spec.uncertainty_model = UncertaintyModel::variance_fraction;
  EXPECT_LT(rel_err(uncertainty_variance(spec, 7e-4), 2.45e-9), 1e-14);
  EXPECT_EQ(uncertainty_variance(spec, 0.0), 0.0);
  EXPECT_LT(rel_err(uncertainty_variance(spec, 2e-4), 4 * uncertainty_variance(spec, 1e-4)), 1e-14);
  spec.uncertainty_model = UncertaintyModel::relative_std;
  EXPECT_LT(rel_err(uncertainty_variance(spec, 7e-4), 0.005 * 0.005 * 49e-8), 1e-14);
  EXPECT_EQ(thrown_kind([&] { uncertainty_variance(spec, -1.0); }), ErrorKind::invalid_parameter);
}

TEST(Noise, VarianceAdditivity) {
  for (auto model : {UncertaintyModel::relative_std, UncertaintyModel::variance_fraction}) {
    NoiseSpec spec = default_scenario().noise;
    spec.uncertainty_model = model;
    const double e_min = projection_min_field(spec);
    for (int k = 0; k < 8; ++k) {
      const double e = k * 1e-4;
      const double s = total_noise_sigma(spec, e);
      EXPECT_LT(rel_err(s * s, uncertainty_variance(spec, e) + e_min * e_min), 4e-16);
    }
  }
}

TEST(Noise, SpecValidation) {
  NoiseSpec spec = default_scenario().noise;
  spec.epsilon = 1.0;
  EXPECT_EQ(thrown_kind([&] { spec.validate(); }), ErrorKind::invalid_parameter);
  spec = default_scenario().noise;
  spec.n_rydberg = 0.5;
  EXPECT_EQ(thrown_kind([&] { spec.validate(); }), ErrorKind::invalid_parameter);
  spec = default_scenario().noise;
  spec.derivative_step = 0.0;
  EXPECT_EQ(thrown_kind([&] { spec.validate(); }), ErrorKind::invalid_parameter);
}

TEST(Noise, UncertaintyModelNames) {
  EXPECT_EQ(parse_uncertainty_model("relative-std"), UncertaintyModel::relative_std);
  EXPECT_EQ(parse_uncertainty_model("variance-fraction"), UncertaintyModel::variance_fraction);
  EXPECT_EQ(thrown_kind([] { parse_uncertainty_model("x"); }), ErrorKind::parse);
}

// Halving the step changes the slope by < 1 %. At the zero-field symbol the
// slope itself vanishes, so there the change is measured against the largest
// slope in the alphabet.
TEST(Noise, SlopeConvergesOnStepHalving) {
  const auto& s = default_scenario();
  std::vector<double> coarse, fine;
  for (int k = 0; k < 8; ++k) {
    coarse.push_back(transmission_slope(s.ladder, k * 1e-4, 1e-8, kShift, Engine::numeric));
    fine.push_back(transmission_slope(s.ladder, k * 1e-4, 5e-9, kShift, Engine::numeric));
  }
  double scale = 0.0;
  for (double v : fine) scale = std::max(scale, std::abs(v));
  for (int k = 0; k < 8; ++k) {
    const double ref = k == 0 ? scale : std::abs(fine[k]);
    EXPECT_LT(std::abs(coarse[k] - fine[k]) / ref, 1e-2) << "level " << k;
  }
  for (int k = 1; k < 8; ++k) EXPECT_LT(fine[k], 0.0);
}

TEST(Noise, SlopeMatchesAnalyticDerivativeOfAnExponential) {
  // Pure weak-probe engine, compared against a much finer central difference.
  const auto& s = default_scenario();
  const double e = 3e-4;
  const double ref = transmission_slope(s.ladder, e, 1e-10, kShift, Engine::weakprobe);
  EXPECT_LT(rel_err(transmission_slope(s.ladder, e, 1e-8, kShift, Engine::weakprobe), ref), 1e-4);
  EXPECT_EQ(thrown_kind([&] { transmission_slope(s.ladder, e, 0.0, kShift, Engine::weakprobe); }),
            ErrorKind::invalid_parameter);
}

TEST(Noise, SamplerMoments) {
  const double t = 0.3, slope = -250.0, sigma = 4e-6;
  NoiseStream stream(99, 0);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_noisy_transmission(t, slope, sigma, stream);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  const double sd = std::abs(slope) * sigma;
  EXPECT_LT(std::abs(mean - t) / sd, 1e-2);
  EXPECT_LT(rel_err(var, sd * sd), 1e-2);
}

TEST(Noise, ZeroSigmaIsNoiseless) {
  NoiseStream stream(1, 0);
  EXPECT_EQ(sample_noisy_transmission(0.4, -10.0, 0.0, stream), 0.4);
  EXPECT_EQ(thrown_kind([&] { sample_noisy_transmission(0.4, -10.0, -1.0, stream); }),
            ErrorKind::invalid_parameter);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  NoiseStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  for (int i = 0; i < 100; ++i) {
    const double x = a.standard_normal();
    EXPECT_EQ(x, b.standard_normal());
    EXPECT_NE(x, c.standard_normal());
    EXPECT_NE(x, d.standard_normal());
  }
  EXPECT_NE(derive_seed(1, "ser/rydberg"), derive_seed(1, "calibrate/pilots"));
  EXPECT_EQ(derive_seed(1, "ser/rydberg"), derive_seed(1, "ser/rydberg"));
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

}  // namespace
