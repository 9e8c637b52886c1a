#include "irisac/scenario.hpp"
#include "test_util.hpp"

#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

namespace irisac {
namespace {

TEST(Scenario, SteeringVectorIsUnitModulus) {
  const ComplexVector b = steering_vector(6, 0.3);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(std::abs(b(i)), 1.0, 1e-15);
  EXPECT_NEAR(std::arg(b(1)), M_PI * std::sin(0.3), 1e-12);
}

TEST(Scenario, PathlossDecaysWithDistance) {
  EXPECT_NEAR(pathloss(1.0, -30.0, 2.2), 1e-3, 1e-15);
  EXPECT_GT(pathloss(10.0, -30.0, 2.2), pathloss(20.0, -30.0, 2.2));
}

TEST(Scenario, ChannelsAreDeterministicInSeed) {
  const Scenario s = testing::desk(Mode::isac);
  const ChannelSet a = testing::channels(s, 42), b = testing::channels(s, 42), c = testing::channels(s, 43);
  EXPECT_EQ(a.G, b.G);
  EXPECT_EQ(a.E, b.E);
  EXPECT_EQ(a.h[1], b.h[1]);
  EXPECT_NE(a.G, c.G);
  EXPECT_EQ(a.G.rows(), 4);
  EXPECT_EQ(static_cast<int>(a.h.size()), 2);
}

TEST(Scenario, LosOnlyChannelHasPathlossMagnitude) {
  // A line-of-sight G has rank one, so only M = 1 passes the rank check.
  Scenario s = testing::desk(Mode::sensing, 1, 4);
  s.model.los_only = true;
  const ChannelSet ch = testing::channels(s, 1);
  const double pl = pathloss(distance(s.geometry.bs, s.geometry.irs), s.model.pathloss_ref_db, s.model.alpha_bs_irs);
  EXPECT_NEAR(ch.G.cwiseAbs2().mean(), pl, 1e-12 * pl);
}

TEST(Scenario, UserGainDecaysWithDistance) {
  Scenario near = testing::desk(Mode::isac), far = near;
  far.geometry.users = {{-40.0, 10.0}, {40.0, 10.0}};
  double en = 0.0, ef = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    en += testing::channels(near, seed).h[0].squaredNorm();
    ef += testing::channels(far, seed).h[0].squaredNorm();
  }
  EXPECT_GT(en, ef);
}

TEST(Scenario, ValidateRejectsBadConfigs) {
  SystemConfig c = desk_scenario(Mode::isac).config;
  EXPECT_NO_THROW(c.validate(Mode::isac));
  SystemConfig bad = c;
  bad.P_t = -1.0;
  EXPECT_THROW(bad.validate(Mode::isac), std::invalid_argument);
  bad = c;
  bad.K = 0;
  bad.gamma.clear();
  EXPECT_THROW(bad.validate(Mode::isac), std::invalid_argument);
  EXPECT_NO_THROW(bad.validate(Mode::sensing));
}

TEST(Scenario, JsonRoundTrip) {
  Scenario s = desk_scenario(Mode::isac);
  s.config.P_s = 0.002;
  s.geometry.target = {3.0, 7.0};
  const Scenario r = scenario_from_json(scenario_to_json(s));
  EXPECT_EQ(r.mode, Mode::isac);
  EXPECT_EQ(r.config.M, 4);
  EXPECT_DOUBLE_EQ(r.config.P_s, 0.002);
  EXPECT_DOUBLE_EQ(r.geometry.target.x, 3.0);
}

TEST(Scenario, JsonPresetAndOverrides) {
  const auto j = nlohmann::json::parse(R"({"mode": "sensing", "preset": "desk", "system": {"P_t_w": 30}})");
  const Scenario s = scenario_from_json(j);
  EXPECT_EQ(s.config.N, 4);
  EXPECT_DOUBLE_EQ(s.config.P_t, 30.0);
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"preset": "huge"})")), std::invalid_argument);
}

}  // namespace
}  // namespace irisac
