#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "orl/vrp/city.hpp"
#include "orl/vrp/env.hpp"

using namespace orl;
using namespace orl::vrp;

namespace {

// No random arrivals or timeouts, so scripted scenarios are exact.
CityConfig quiet() {
  CityConfig c;
  c.order_prob = 0.0;
  c.timeout_prob = 0.0;
  return c;
}

int act(const CityConfig& c, ActionKind k, int i = 0) { return encode(c, {k, i}); }

Cell neighbour(Cell c, const CityConfig& cfg) { return c.x + 1 < cfg.width ? Cell{c.x + 1, c.y} : Cell{c.x - 1, c.y}; }

}  // namespace

TEST(City, Validation) {
  CityConfig c;
  c.width = c.height = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.zone_probs = {0.5, 0.5, 0.5, 0.5};
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.zone_values[0] = {3.0, 3.0};
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.move_cost = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(CityConfig{}.validate());
}

TEST(City, PresetsCoverScenarioGrid) {
  const auto all = presets::all();
  EXPECT_EQ(all.size(), 16u);
  const auto c = *presets::find("8x8-o10-p3-hot");
  EXPECT_EQ(c.width, 8);
  EXPECT_EQ(c.max_orders, 10);
  EXPECT_EQ(c.n_pickup, 3);
  EXPECT_EQ(c.zone_probs, presets::hot_zone_probs());
}

TEST(City, StepTowardMovesXFirst) {
  EXPECT_EQ(step_toward({0, 0}, {2, 3}), (Cell{1, 0}));
  EXPECT_EQ(step_toward({2, 0}, {2, 3}), (Cell{2, 1}));
  EXPECT_EQ(step_toward({2, 3}, {2, 3}), (Cell{2, 3}));
}

TEST(OrderValue, StaysInZoneRange) {
  const CityConfig c;
  RngStream r(4, 0);
  for (int i = 0; i < 10000; ++i) {
    const double v1 = sample_order_value(c, 0, r);
    ASSERT_GE(v1, 8.0);
    ASSERT_LE(v1, 12.0);
    const double v4 = sample_order_value(c, 3, r);
    ASSERT_GE(v4, 1.0);
    ASSERT_LE(v4, 3.0);
  }
  EXPECT_THROW(sample_order_value(c, 4, r), std::out_of_range);
}

TEST(OrderValue, SymmetricTruncationMean) {
  const CityConfig c;
  RngStream r(5, 0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) sum += sample_order_value(c, 0, r);
  EXPECT_NEAR(sum / 100000, 10.0, 0.05);
}

TEST(Reset, DistinctRestaurantsAndFullCapacity) {
  VrpEnv env(*presets::find("5x5-o5-p2"));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = env.reset(RngStream(seed, 0));
    const auto& st = env.state();
    ASSERT_EQ(st.restaurants.size(), 2u);
    EXPECT_FALSE(st.restaurants[0] == st.restaurants[1]);
    EXPECT_FALSE(st.driver == st.restaurants[0]);
    EXPECT_EQ(st.capacity_left, 4);
    const auto& c = env.config();
    for (int i = 0; i < c.max_orders; ++i) {
      EXPECT_FALSE(s.action_mask[static_cast<std::size_t>(act(c, ActionKind::Accept, i))]);
      EXPECT_FALSE(s.action_mask[static_cast<std::size_t>(act(c, ActionKind::Pickup, i))]);
      EXPECT_FALSE(s.action_mask[static_cast<std::size_t>(act(c, ActionKind::Deliver, i))]);
    }
    for (int j = 0; j < c.n_pickup; ++j) EXPECT_TRUE(s.action_mask[static_cast<std::size_t>(act(c, ActionKind::GoToPickup, j))]);
    EXPECT_TRUE(s.action_mask.back());
    EXPECT_EQ(s.observation.size(), env.observation_size());
  }
}

TEST(Reset, TooManyPickupsIsConfigError) {
  CityConfig c;
  c.width = c.height = 2;
  c.n_pickup = 4;
  EXPECT_THROW(VrpEnv{c}, ConfigError);
}

TEST(Actions, EncodeDecodeRoundTrip) {
  const CityConfig c;
  for (int a = 0; a < static_cast<int>(c.action_count()); ++a) EXPECT_EQ(encode(c, decode(c, a)), a);
  EXPECT_EQ(c.action_count(), 3u * 5u + 2u + 1u);
  EXPECT_THROW(decode(c, static_cast<int>(c.action_count())), InfeasibleAction);
}

TEST(Mask, Rules) {
  VrpEnv env(quiet());
  env.reset(RngStream(1, 0));
  const auto& c = env.config();
  const int a = env.inject_order(0, {0, 0}, 9.0);
  const int b = env.inject_order(1, {1, 1}, 9.0);
  auto mask = action_mask(c, env.state());
  EXPECT_TRUE(mask[static_cast<std::size_t>(act(c, ActionKind::Accept, a))]);
  EXPECT_FALSE(mask[static_cast<std::size_t>(act(c, ActionKind::Pickup, a))]);   // not accepted yet
  EXPECT_FALSE(mask[static_cast<std::size_t>(act(c, ActionKind::Deliver, a))]);  // not in transit
  env.step(act(c, ActionKind::Accept, a));
  env.mutable_state().capacity_left = 2;
  mask = action_mask(c, env.state());
  EXPECT_TRUE(mask[static_cast<std::size_t>(act(c, ActionKind::Pickup, a))]);
  EXPECT_FALSE(mask[static_cast<std::size_t>(act(c, ActionKind::Accept, a))]);
  env.mutable_state().capacity_left = 0;
  mask = action_mask(c, env.state());
  for (int i = 0; i < c.max_orders; ++i) EXPECT_FALSE(mask[static_cast<std::size_t>(act(c, ActionKind::Pickup, i))]);
  EXPECT_TRUE(mask[static_cast<std::size_t>(act(c, ActionKind::Accept, b))]);
}

TEST(Step, WaitWithNoEvents) {
  VrpEnv env(quiet());
  env.reset(RngStream(1, 0));
  const auto s = env.step(act(env.config(), ActionKind::Wait));
  EXPECT_DOUBLE_EQ(s.reward, -0.1);
}

TEST(Step, FullOrderLifecycleCreditsThirds) {
  VrpEnv env(quiet());
  env.reset(RngStream(2, 0));
  const auto& c = env.config();
  const Cell r0 = env.state().restaurants[0];
  const Cell drop = neighbour(r0, c);
  const int slot = env.inject_order(0, drop, 9.0);

  auto s = env.step(act(c, ActionKind::Accept, slot));
  EXPECT_DOUBLE_EQ(s.reward, 3.0 - 0.1);
  EXPECT_EQ(env.last_step().cells_moved, 0);

  double pickup_reward = 0.0;
  while (env.state().orders[static_cast<std::size_t>(slot)].status != OrderStatus::PickedUp) {
    s = env.step(act(c, ActionKind::Pickup, slot));
    pickup_reward = s.reward;
  }
  EXPECT_DOUBLE_EQ(pickup_reward, 3.0 - 0.1 - 0.1);
  EXPECT_EQ(env.state().capacity_left, 3);

  s = env.step(act(c, ActionKind::Deliver, slot));
  EXPECT_DOUBLE_EQ(s.reward, 2.8);
  const auto& o = env.state().orders[static_cast<std::size_t>(slot)];
  EXPECT_EQ(o.status, OrderStatus::Delivered);
  EXPECT_EQ(o.credited, 9.0);
  EXPECT_EQ(env.state().capacity_left, 4);
}

TEST(Step, ThirdsSumExactlyForAwkwardValues) {
  for (double v : {0.1, 1.0 / 7.0, 10.000000000000002, 2.3333333333333335}) {
    VrpEnv env(quiet());
    env.reset(RngStream(3, 0));
    const auto& c = env.config();
    const int slot = env.inject_order(0, env.state().restaurants[0], v);
    env.step(act(c, ActionKind::Accept, slot));
    while (env.state().orders[static_cast<std::size_t>(slot)].status == OrderStatus::Accepted)
      env.step(act(c, ActionKind::Pickup, slot));
    env.step(act(c, ActionKind::Deliver, slot));
    EXPECT_EQ(env.state().orders[static_cast<std::size_t>(slot)].credited, v);
  }
}

TEST(Step, AcceptedOrderBreachingWindowCostsPenalty) {
  VrpEnv env(quiet());
  env.reset(RngStream(4, 0));
  const auto& c = env.config();
  const int slot = env.inject_order(0, {0, 0}, 6.0);
  env.step(act(c, ActionKind::Accept, slot));
  env.mutable_state().orders[static_cast<std::size_t>(slot)].elapsed = c.time_window;
  const auto s = env.step(act(c, ActionKind::Wait));
  EXPECT_DOUBLE_EQ(s.reward, -50.1);
  EXPECT_EQ(env.state().orders[static_cast<std::size_t>(slot)].status, OrderStatus::Expired);
}

TEST(Step, PickedUpOrderBreachFreesCapacity) {
  VrpEnv env(quiet());
  env.reset(RngStream(4, 1));
  const auto& c = env.config();
  const int slot = env.inject_order(0, env.state().restaurants[0], 6.0);
  env.step(act(c, ActionKind::Accept, slot));
  while (env.state().orders[static_cast<std::size_t>(slot)].status == OrderStatus::Accepted)
    env.step(act(c, ActionKind::Pickup, slot));
  EXPECT_EQ(env.state().capacity_left, 3);
  env.mutable_state().orders[static_cast<std::size_t>(slot)].elapsed = c.time_window;
  const auto s = env.step(act(c, ActionKind::Wait));
  EXPECT_DOUBLE_EQ(s.reward, -50.1);
  EXPECT_EQ(env.state().capacity_left, 4);
}

TEST(Step, OpenOrderExpiryIsFree) {
  CityConfig c = quiet();
  c.timeout_prob = 1.0;
  VrpEnv env(c);
  env.reset(RngStream(5, 0));
  const int slot = env.inject_order(0, {0, 0}, 6.0);
  const auto s = env.step(act(c, ActionKind::Wait));
  EXPECT_DOUBLE_EQ(s.reward, -0.1);
  EXPECT_EQ(env.state().orders[static_cast<std::size_t>(slot)].status, OrderStatus::Expired);
}

TEST(Step, ArrivalsFillFreeSlotsOnly) {
  CityConfig c;
  c.order_prob = 1.0;
  c.timeout_prob = 0.0;
  VrpEnv env(c);
  env.reset(RngStream(6, 0));
  for (int i = 0; i < 20; ++i) env.step(act(c, ActionKind::Wait));
  int live = 0;
  for (const auto& o : env.state().orders) live += is_live(o.status);
  EXPECT_EQ(live, c.max_orders);
}

TEST(Step, EpisodeEndsAtLength) {
  CityConfig c;
  c.episode_len = 25;
  VrpEnv env(c);
  auto s = env.reset(RngStream(7, 0));
  int steps = 0;
  while (!s.done) {
    s = env.step(act(c, ActionKind::Wait));
    ++steps;
  }
  EXPECT_EQ(steps, 25);
  EXPECT_THROW(env.step(act(c, ActionKind::Wait)), InfeasibleAction);
}

// Random play over many steps: capacity identity, shaping thirds, movement
// bound, and mask rules on every visited state.
TEST(Properties, RandomPlay) {
  for (const char* name : {"5x5-o5-p2", "8x8-o10-p3"}) {
    VrpEnv env(*presets::find(name));
    const auto& c = env.config();
    RngStream pick(10, 1);
    auto s = env.reset(RngStream(10, 0));
    std::map<std::int64_t, double> credited;
    int episode = 0;
    for (int i = 0; i < 50000; ++i) {
      if (s.done) s = env.reset(RngStream(10, static_cast<std::uint64_t>(++episode) + 1));
      const auto& st = env.state();
      ASSERT_EQ(st.capacity_left, c.capacity - st.picked_up_count());
      for (int k = 0; k < c.max_orders; ++k) {
        const auto status = st.orders[static_cast<std::size_t>(k)].status;
        ASSERT_EQ(s.action_mask[static_cast<std::size_t>(act(c, ActionKind::Pickup, k))],
                  status == OrderStatus::Accepted && st.capacity_left > 0);
        ASSERT_EQ(s.action_mask[static_cast<std::size_t>(act(c, ActionKind::Deliver, k))], status == OrderStatus::PickedUp);
        ASSERT_EQ(s.action_mask[static_cast<std::size_t>(act(c, ActionKind::Accept, k))], status == OrderStatus::Open);
      }
      std::vector<double> w(s.action_mask.size());
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = s.action_mask[k];
      const Cell before = st.driver;
      const auto orders_before = st.orders;
      s = env.step(static_cast<int>(pick.categorical(w)));
      ASSERT_LE(manhattan(before, env.state().driver), 1);
      for (const auto& ev : env.last_step().events) {
        if (ev.kind == EventKind::Delivered) {
          // The slot may already hold a fresh arrival, so use the pre-step copy.
          const auto& o = orders_before[static_cast<std::size_t>(ev.slot)];
          ASSERT_EQ(o.credited + ev.amount, o.value);
        }
        if (ev.kind == EventKind::TimedOut) {
          ASSERT_EQ(ev.amount, 0.0);
        }
      }
    }
  }
}
