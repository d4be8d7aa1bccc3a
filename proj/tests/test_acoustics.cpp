#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "uwhunt/acoustics.hpp"
#include "uwhunt/errors.hpp"

using namespace uwh;

namespace {

GameState line_state(std::vector<double> distances) {
  GameState s;
  for (double d : distances) s.pursuers.push_back({-d, 0.0});
  return s;
}

}  // namespace

TEST(SoundSpeed, ReferencePoints) {
  EXPECT_DOUBLE_EQ(sound_speed({0.0, 35.0, 0.0}), 1450.0);
  EXPECT_NEAR(sound_speed({10.0, 35.0, 0.0}), 1488.4, 1e-9);
  EXPECT_NEAR(sound_speed({20.0, 30.0, 10.0}), 1515.45, 1e-9);
}

TEST(SoundSpeed, MatchesFormulaOverSanityBox) {
  Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const WaterColumn w{rng.uniform(-2, 40), rng.uniform(0, 45), rng.uniform(0, 5000)};
    EXPECT_NEAR(sound_speed(w), oracle::sound_speed(w.temperature, w.salinity, w.pressure), 1e-9);
  }
}

TEST(SoundSpeed, MonotoneInPressureAndSalinity) {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    WaterColumn w{rng.uniform(-2, 40), rng.uniform(30, 40), rng.uniform(0, 4000)};
    const double base = sound_speed(w);
    WaterColumn wp = w;
    wp.pressure += 1.0;
    WaterColumn ws = w;
    ws.salinity += 0.1;
    EXPECT_GT(sound_speed(wp), base);
    EXPECT_GT(sound_speed(ws), base);
  }
}

TEST(SoundSpeed, OutOfRangeRejected) {
  EXPECT_THROW(sound_speed({50.0, 35.0, 0.0}), DomainError);
  EXPECT_THROW(sound_speed({10.0, -1.0, 0.0}), DomainError);
  EXPECT_THROW(sound_speed({10.0, 35.0, -5.0}), DomainError);
}

TEST(OneWayDelay, Examples) {
  EXPECT_DOUBLE_EQ(one_way_delay(1500, 0, 1500), 1.0);
  EXPECT_DOUBLE_EQ(one_way_delay(3000, 0, 1500), 2.0);
  EXPECT_DOUBLE_EQ(one_way_delay(0, 0, 1500), 0.0);
}

TEST(OneWayDelay, Errors) {
  EXPECT_THROW(one_way_delay(10, 1500, 1500), PropagationError);
  EXPECT_THROW(one_way_delay(10, 2000, 1500), PropagationError);
  EXPECT_THROW(one_way_delay(-1, 0, 1500), DomainError);
}

TEST(AverageDelay, SingleSymmetricLink) {
  const std::vector<double> speeds{0.0, 0.0};
  EXPECT_DOUBLE_EQ(average_delay(line_state({1500}), speeds, 1500), 1.0);
}

TEST(AverageDelay, ArithmeticMean) {
  const std::vector<double> speeds{0.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(average_delay(line_state({1500, 4500}), speeds, 1500), 2.0);
}

TEST(AverageDelay, CoLocatedIsZero) {
  const std::vector<double> speeds{1.0, 1.0, 1.0, 1.0};
  EXPECT_EQ(average_delay(line_state({0, 0, 0}), speeds, 1500), 0.0);
}

TEST(AverageDelay, PermutationInvariant) {
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> d{rng.uniform(1, 90), rng.uniform(1, 90), rng.uniform(1, 90)};
    std::vector<double> v{rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3), 1.0};
    const double base = average_delay(line_state(d), v, 1500);
    std::vector<int> idx{0, 1, 2};
    while (std::next_permutation(idx.begin(), idx.end())) {
      std::vector<double> dp, vp;
      for (int i : idx) {
        dp.push_back(d[i]);
        vp.push_back(v[i]);
      }
      vp.push_back(v[3]);
      EXPECT_NEAR(average_delay(line_state(dp), vp, 1500), base, 1e-15);
    }
  }
}

TEST(AverageDelay, LinearInDistanceAtRest) {
  const std::vector<double> speeds(4, 0.0);
  const double base = average_delay(line_state({10, 20, 30}), speeds, 1500);
  EXPECT_NEAR(average_delay(line_state({30, 60, 90}), speeds, 1500), 3 * base, 1e-15);
}

TEST(DelayBuffer, ViewFloorsDelay) {
  DelayBuffer buf(10);
  for (int k = 0; k < 6; ++k) {
    GameState s;
    s.slot = k;
    buf.push(s);
  }
  EXPECT_EQ(delayed_view(buf, 5, 0.0).state->slot, 5);
  const auto v = delayed_view(buf, 5, 2.7);
  EXPECT_EQ(v.state->slot, 3);
  EXPECT_FALSE(v.truncated);
  const auto far = delayed_view(buf, 5, 40.0);
  EXPECT_EQ(far.state->slot, 0);
  EXPECT_TRUE(far.truncated);
  EXPECT_EQ(&buf.newest(), delayed_view(buf, 5, 0.0).state);
}

TEST(DelayBuffer, CapacityAndOrdering) {
  DelayBuffer buf(4);
  EXPECT_THROW(delayed_view(buf, 0, 0.0), StateError);
  for (int k = 0; k < 20; ++k) {
    GameState s;
    s.slot = k;
    buf.push(s);
    EXPECT_LE(buf.size(), 4u);
    EXPECT_GE(buf.oldest_slot(), k - 4);
    EXPECT_EQ(buf.newest_slot(), k);
  }
  EXPECT_EQ(buf.oldest_slot(), 16);
  EXPECT_EQ(buf.at(18).slot, 18);
  GameState gap;
  gap.slot = 25;
  EXPECT_THROW(buf.push(gap), StateError);
}

TEST(DelaySlots, Floor) {
  EXPECT_EQ(delay_slots(0.0), 0);
  EXPECT_EQ(delay_slots(2.7), 2);
  EXPECT_EQ(delay_slots(3.0), 3);
  EXPECT_EQ(delay_slots(5.0, 2.0), 2);
}
