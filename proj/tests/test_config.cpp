#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "uwhunt/config.hpp"
#include "uwhunt/environment.hpp"
#include "uwhunt/errors.hpp"

using namespace uwh;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyFileGivesReferenceScenario) {
  const ScenarioConfig c = parse_config("");
  EXPECT_EQ(c.num_pursuers, 3);
  EXPECT_EQ(c.termination.sense_radius, 80.0);
  EXPECT_EQ(c.termination.attack_radius, 15.0);
  EXPECT_EQ(c.termination.safety_radius, 5.0);
  EXPECT_EQ(c.termination.horizon, 1000);
  EXPECT_EQ(c.termination.escape_value, -1.0);
  EXPECT_EQ(c.termination.capture_value, 10.0);
  EXPECT_EQ(c.initial_distance, 40.0);
  EXPECT_EQ(c.start_point, Eigen::Vector3d(400, 400, -200));
  EXPECT_NEAR(c.speed.pursuer, 5 * 1852.0 / 3600.0, 1e-15);
  EXPECT_EQ(c.dqn.learning_rate, 0.0002);
  EXPECT_EQ(c.dqn.discount, 0.9);
  EXPECT_EQ(c.dqn.batch_size, 128);
  EXPECT_EQ(c.dqn.memory_capacity, 10000);
  EXPECT_EQ(c.dqn.epsilon, 0.9);
  EXPECT_EQ(c.dqn.episodes, 5000);
}

TEST(Config, RadiusOrderingNamesBothKeys) {
  const std::string msg = error_of("[game]\nattack_radius = 90\n");
  EXPECT_NE(msg.find("game.attack_radius"), std::string::npos);
  EXPECT_NE(msg.find("game.sensing_radius"), std::string::npos);
}

TEST(Config, ZeroConstraintARejected) {
  EXPECT_NE(error_of("[game]\nconstraint_a = 0\n").find("game.constraint_a"), std::string::npos);
}

TEST(Config, UnknownKeysAndTypesRejected) {
  EXPECT_NE(error_of("[game]\nbogus = 1\n").find("game.bogus"), std::string::npos);
  EXPECT_NE(error_of("[dqn]\nbatch_size = 1.5\n").find("dqn.batch_size"), std::string::npos);
  EXPECT_NE(error_of("[acoustics]\ndelay_mode = \"sometimes\"\n").find("acoustics.delay_mode"),
            std::string::npos);
  EXPECT_FALSE(error_of("[game\n").empty());
}

TEST(Config, OverridesApply) {
  const ScenarioConfig c = parse_config(
      "seed = 42\n[scenario]\nnum_pursuers = 4\n[acoustics]\ndelay_mode = \"off\"\n"
      "[dqn]\nhidden_sizes = [32, 16]\n");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.num_pursuers, 4);
  EXPECT_EQ(c.delay_mode, DelayMode::Off);
  EXPECT_EQ(c.dqn.hidden_sizes, (std::vector<int>{32, 16}));
}

TEST(Config, TomlRoundTrip) {
  ScenarioConfig c;
  c.seed = 99;
  c.disturbance_bound = 0.0123456789;
  c.dqn.learning_rate = 1.0 / 3.0;
  c.delay_scale = 250.0;
  const ScenarioConfig back = parse_config(to_toml(c));
  EXPECT_EQ(to_toml(back), to_toml(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(Config, HashChangesWithAnyValue) {
  const ScenarioConfig base;
  std::set<std::string> hashes{config_hash(base)};
  ScenarioConfig c = base;
  c.seed = 2;
  hashes.insert(config_hash(c));
  c = base;
  c.dqn.discount = 0.95;
  hashes.insert(config_hash(c));
  c = base;
  c.termination.strict_escape = true;
  hashes.insert(config_hash(c));
  c = base;
  c.water.temperature = 11.0;
  hashes.insert(config_hash(c));
  EXPECT_EQ(hashes.size(), 5u);
  EXPECT_EQ(config_hash(base), config_hash(ScenarioConfig{}));
  EXPECT_EQ(config_hash(base).size(), 16u);
}

TEST(Placement, GeometryInvariants) {
  const ScenarioConfig cfg;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const World w = place_initial(cfg, rng);
    const GameState s = snapshot(w, 1.0);
    EXPECT_NEAR((s.target - cfg.origin()).norm(), 40.0, 1e-9);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        EXPECT_GT((s.pursuers[i] - s.pursuers[j]).norm(), cfg.termination.safety_radius);
    for (const auto& a : w.agents) EXPECT_EQ(a.pose.depth, -200.0);
  }
}

TEST(Placement, Deterministic) {
  const ScenarioConfig cfg;
  Rng a(5), b(5);
  EXPECT_EQ(snapshot(place_initial(cfg, a), 1.0).stacked(),
            snapshot(place_initial(cfg, b), 1.0).stacked());
}

TEST(Streams, IndependentAndReproducible) {
  EXPECT_TRUE(Rng::stream(1, Stream::Placement, 3) == Rng::stream(1, Stream::Placement, 3));
  EXPECT_FALSE(Rng::stream(1, Stream::Placement, 3) == Rng::stream(1, Stream::Placement, 4));
  EXPECT_FALSE(Rng::stream(1, Stream::Placement) == Rng::stream(1, Stream::Disturbance));
  EXPECT_FALSE(Rng::stream(1, Stream::Placement) == Rng::stream(2, Stream::Placement));
  Rng r(7);
  r.uniform();
  Rng copy(0);
  copy.deserialize(r.serialize());
  EXPECT_TRUE(copy == r);
  EXPECT_EQ(copy.next_u64(), r.next_u64());
}

TEST(Rng, UniformIndexRange) {
  Rng r(1);
  for (int k = 0; k < 10000; ++k) {
    EXPECT_LT(r.uniform_index(7), 7u);
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
