#include "irisac/metrics.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace irisac {
namespace {

using testing::fim_oracle;

TEST(Metrics, FimMatchesVectorizedModel) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Scenario s = testing::desk(Mode::sensing, 3, 3);
    const ChannelSet ch = testing::channels(s, seed);
    Rng rng(seed);
    const ReflectDesign rf = ReflectDesign::uniform(3, 4.0, unit_phases(complex_gaussian_vector(3, rng)));
    const ComplexMatrix x = dft_waveform(testing::random_pd(3, rng) * s.config.P_t, 4);
    const RealMatrix f = fim(ch, x, rf, s.config), o = fim_oracle(ch, x, rf, s.config);
    EXPECT_LT((f - o).norm(), 1e-9 * o.norm());
  }
}

TEST(Metrics, ClosedFormCrbEqualsTraceOfInverseFim) {
  for (int m : {2, 3, 4}) {
    for (int t : {4, 8}) {
      Scenario s = testing::desk(Mode::sensing, m, m);
      s.config.T = t;
      const ChannelSet ch = testing::channels(s, static_cast<std::uint64_t>(10 * m + t));
      Rng rng(static_cast<std::uint64_t>(m * t));
      ReflectDesign rf = ReflectDesign::uniform(m, 1.0, unit_phases(complex_gaussian_vector(m, rng)));
      for (int i = 0; i < m; ++i) rf.p(i) = 2.0 + 3.0 * std::abs(complex_gaussian(rng));
      const ComplexMatrix rx = testing::random_pd(m, rng) * s.config.P_t;
      const RealMatrix f = fim_oracle(ch, dft_waveform(rx, t), rf, s.config);
      const double oracle = testing::trace_of_inverse(f);
      const auto cf = crb_closed_form(ch, rx, rf, s.config);
      ASSERT_TRUE(cf.has_value());
      EXPECT_LT(testing::rel_diff(*cf, oracle), 1e-8) << "M=" << m << " T=" << t;
    }
  }
}

TEST(Metrics, DftWaveformReproducesCovariance) {
  Rng rng(2);
  const ComplexMatrix rx = testing::random_pd(4, rng);
  const ComplexMatrix x = dft_waveform(rx, 16);
  EXPECT_LT((x * x.adjoint() / 16.0 - rx).norm(), 1e-13);
  EXPECT_THROW(dft_waveform(rx, 3), std::invalid_argument);
}

TEST(Metrics, CrbIsIndependentOfPhases) {
  const Scenario s = testing::desk(Mode::sensing);
  const ChannelSet ch = testing::channels(s, 5);
  Rng rng(5);
  const ComplexMatrix rx = testing::random_pd(4, rng) * 10.0;
  const ReflectDesign a = ReflectDesign::uniform(4, 3.0, unit_phases(complex_gaussian_vector(4, rng)));
  const ReflectDesign b = ReflectDesign::uniform(4, 3.0, unit_phases(complex_gaussian_vector(4, rng)));
  EXPECT_LT(testing::rel_diff(*crb_closed_form(ch, rx, a, s.config), *crb_closed_form(ch, rx, b, s.config)), 1e-12);
}

TEST(Metrics, CrbUnboundedForZeroAmplitude) {
  const Scenario s = testing::desk(Mode::sensing);
  const ChannelSet ch = testing::channels(s, 5);
  ReflectDesign rf = ReflectDesign::uniform(4, 3.0, ComplexVector::Ones(4));
  rf.p(2) = 0.0;
  EXPECT_FALSE(crb_closed_form(ch, ComplexMatrix::Identity(4, 4), rf, s.config).has_value());
}

TEST(Metrics, IrsPowerTermsMatchFrobeniusForms) {
  const Scenario s = testing::desk(Mode::sensing);
  const ChannelSet ch = testing::channels(s, 8);
  Rng rng(8);
  ReflectDesign rf = ReflectDesign::uniform(4, 1.0, unit_phases(complex_gaussian_vector(4, rng)));
  for (int i = 0; i < 4; ++i) rf.p(i) = 1.0 + i;
  const ComplexMatrix rx = testing::random_pd(4, rng) * 20.0;
  const ComplexMatrix root = psd_sqrt(rx);
  const ComplexMatrix psi = rf.P() * rf.Phi();
  const double sr = 1e-3;
  const IrsPowerTerms t = irs_power_terms(ch, rx, rf, sr);
  EXPECT_NEAR(t.forward, (psi * ch.G * root).squaredNorm(), 1e-10 * t.forward);
  EXPECT_NEAR(t.echo, (psi * ch.E * psi * ch.G * root).squaredNorm(), 1e-10 * t.echo);
  EXPECT_NEAR(t.echo_noise, sr * (psi * ch.E * psi).squaredNorm(), 1e-10 * t.echo_noise);
  EXPECT_NEAR(t.self_noise, 2.0 * sr * psi.squaredNorm(), 1e-15);
  EXPECT_DOUBLE_EQ(t.total(), t.echo + t.forward + t.echo_noise + t.self_noise);
}

TEST(Metrics, SinrFromCovarianceBlocks) {
  const Scenario s = testing::desk(Mode::isac);
  const ChannelSet ch = testing::channels(s, 4);
  Rng rng(4);
  const ReflectDesign rf = ReflectDesign::uniform(4, 5.0, unit_phases(complex_gaussian_vector(4, rng)));
  TransmitDesign tx;
  tx.w = {complex_gaussian_vector(4, rng), complex_gaussian_vector(4, rng)};
  tx.R0 = testing::random_pd(4, rng);
  for (int k = 0; k < 2; ++k) {
    // h^H Psi G x as the received sample
    const ComplexVector row = (ch.h[k].adjoint() * rf.Psi() * ch.G).transpose();
    const double sig = std::norm(row.dot(tx.w[k].conjugate()));
    const double intf = std::norm(row.dot(tx.w[1 - k].conjugate())) + (row.transpose() * tx.R0 * row.conjugate())(0, 0).real();
    double irs = 0.0;
    for (int n = 0; n < 4; ++n) irs += s.config.sigma_r2 * std::norm(ch.h[k](n)) * rf.p(n) * rf.p(n);
    EXPECT_NEAR(sinr(k, ch, tx, rf, s.config), sig / (intf + irs + s.config.sigma_u2), 1e-9 * sig / intf);
  }
}

TEST(Metrics, FeasibilityFlagsEachConstraint) {
  const Scenario s = testing::desk(Mode::isac);
  const ChannelSet ch = testing::channels(s, 4);
  const ReflectDesign rf = ReflectDesign::uniform(4, s.config.a_max * 2.0, ComplexVector::Ones(4));
  TransmitDesign tx;
  tx.w = {ComplexVector::Zero(4), ComplexVector::Zero(4)};
  tx.R0 = ComplexMatrix::Identity(4, 4) * s.config.P_t;
  const MetricsReport r = check_feasibility(ch, tx, rf, s.config);
  EXPECT_FALSE(r.sinr_ok);
  EXPECT_FALSE(r.amplitude_ok);
  EXPECT_FALSE(r.bs_power_ok);
  EXPECT_FALSE(r.feasible());
  ConstraintSet none{false, false, false};
  tx.R0 /= 8.0;
  EXPECT_TRUE(check_feasibility(ch, tx, rf, s.config, none).feasible());
}

}  // namespace
}  // namespace irisac
