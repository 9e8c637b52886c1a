#include "irisac/isac.hpp"
#include "irisac/scaling_law.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace irisac {
namespace {

ScalingBetas random_betas(Rng& rng, int users) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  ScalingBetas b;
  b.b1 = 0.3 * u(rng);
  b.b2 = 0.3 * u(rng);
  b.b3 = u(rng);
  b.b4 = 0.5 * u(rng);
  b.b5 = u(rng);
  b.b6 = u(rng);
  for (int k = 0; k < users; ++k) {
    b.b7.push_back(-u(rng));
    b.b8.push_back(0.2 * u(rng));
  }
  return b;
}

SystemConfig unit_config(double ps, double su = 0.05) {
  SystemConfig c;
  c.P_s = ps;
  c.sigma_u2 = su;
  return c;
}

double bound(const ScalingBetas& b, double res) { return 3.0 * res * (b.b5 * b.b6 + b.b5 * b.b6 * b.b6); }

TEST(Scaling, SensingClosedFormMatchesGrid) {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const ScalingBetas b = random_betas(rng, 0);
    const SystemConfig c = unit_config(0.3 + 0.2 * i);
    const double res = 1e-3 * std::min(b.b5, b.b6);
    const ScalingResult r = scaling_sensing(b, c, ScalingGiven::joint());
    const ScalingResult g = grid_oracle(b, c, Mode::sensing, res);
    ASSERT_TRUE(r.feasible);
    EXPECT_LE(scaled_irs_power(b, r.delta_r, r.delta_p), c.P_s * (1.0 + 1e-8));
    EXPECT_LE(std::abs(r.objective() - g.objective()), bound(b, res));
    EXPECT_GE(r.objective(), g.objective() * (1.0 - 1e-9));
    EXPECT_FALSE(r.binding.empty());
  }
}

TEST(Scaling, IsacClosedFormMatchesGrid) {
  Rng rng(2);
  int feasible = 0;
  for (int i = 0; i < 10; ++i) {
    const ScalingBetas b = random_betas(rng, 2);
    const SystemConfig c = unit_config(0.5);
    const double res = 1e-3 * std::min(b.b5, b.b6);
    const ScalingResult r = scaling_isac(b, c, ScalingGiven::joint());
    const ScalingResult g = grid_oracle(b, c, Mode::isac, res);
    if (!r.feasible) {
      EXPECT_FALSE(g.feasible);
      continue;
    }
    ++feasible;
    EXPECT_LE(scaled_sinr_row(b, r.delta_r, r.delta_p, c.sigma_u2), 1e-12);
    EXPECT_LE(std::abs(r.objective() - g.objective()), bound(b, res));
  }
  EXPECT_GT(feasible, 0);
}

TEST(Scaling, GivenOneCoordinateTheOtherSitsOnTheBoundary) {
  Rng rng(3);
  const ScalingBetas b = random_betas(rng, 0);
  const SystemConfig c = unit_config(0.4);
  const ScalingResult r = scaling_sensing(b, c, ScalingGiven::fixed_r(0.5 * b.b5));
  EXPECT_TRUE(std::abs(scaled_irs_power(b, r.delta_r, r.delta_p) - c.P_s) < 1e-9 || r.delta_p == b.b6);
  const ScalingResult p = scaling_sensing(b, c, ScalingGiven::fixed_p(0.5 * b.b6));
  EXPECT_FALSE(p.binding.empty());
  EXPECT_THROW(scaling_sensing(b, c, ScalingGiven::fixed_r(2.0 * b.b5)), std::invalid_argument);
}

TEST(Scaling, ApproximationIgnoresQuadraticTerms) {
  ScalingBetas b;
  b.b3 = 1.0;
  b.b4 = 1.0;
  b.b5 = 10.0;
  b.b6 = 10.0;
  const SystemConfig c = unit_config(1.0);
  const ScalingResult r = scaling_sensing(b, c, ScalingGiven::joint());
  // Without b1, b2 the problem is exact: dp = P_s / (2 b4), dr = b4 / b3.
  EXPECT_NEAR(r.approx_delta_p, 0.5, 1e-12);
  EXPECT_NEAR(r.approx_delta_r, 1.0, 1e-12);
  EXPECT_NEAR(r.delta_p, 0.5, 1e-9);
  EXPECT_NEAR(r.delta_r, 1.0, 1e-9);
}

TEST(Scaling, RefinedGridIsNotWorse) {
  Rng rng(4);
  const ScalingBetas b = random_betas(rng, 0);
  const SystemConfig c = unit_config(0.3);
  const double h = 4e-3 * std::min(b.b5, b.b6);
  EXPECT_GE(grid_oracle(b, c, Mode::sensing, h / 2).objective(), grid_oracle(b, c, Mode::sensing, h).objective());
}

TEST(Scaling, NonNegativeUserCoefficientIsRejected) {
  Rng rng(5);
  ScalingBetas b = random_betas(rng, 2);
  b.b7[1] = 0.1;
  EXPECT_THROW(scaling_isac(b, unit_config(0.5), ScalingGiven::joint()), std::domain_error);
}

TEST(Scaling, BetasReproduceScaledDesign) {
  Scenario s = testing::desk(Mode::isac);
  s.config.sigma_r2 = 1e-9;
  const ChannelSet ch = testing::channels(s, 7);
  Rng rng(7);
  const ReflectDesign rf = ReflectDesign::uniform(4, 1.0, unit_phases(complex_gaussian_vector(4, rng)));
  TransmitDesign tx;
  tx.w = {complex_gaussian_vector(4, rng), complex_gaussian_vector(4, rng)};
  tx.R0 = testing::random_pd(4, rng);
  const ScalingBetas b = compute_betas(ch, tx, rf, s.config, Mode::isac);
  const double dr = 2.5, dp = 7.0;
  TransmitDesign scaled = tx;
  for (auto& w : scaled.w) w *= std::sqrt(dr);
  scaled.R0 *= dr;
  const ReflectDesign srf{std::sqrt(dp) * rf.p, rf.phi};
  const double power = irs_power_usage(ch, scaled, srf, s.config);
  EXPECT_NEAR(scaled_irs_power(b, dr, dp), power, 1e-10 * power);
  for (int k = 0; k < 2; ++k) {
    const double g = sinr(k, ch, scaled, srf, s.config);
    const double row = b.b7[k] * dr * dp + b.b8[k] * dp + s.config.sigma_u2;
    EXPECT_EQ(g >= s.config.gamma[k], row <= 0.0);
  }
  EXPECT_NEAR(b.b5, s.config.P_t / tx.Rx().trace().real(), 1e-12);
  EXPECT_NEAR(b.b6, s.config.a_max * s.config.a_max, 1e-12);
}

}  // namespace
}  // namespace irisac
