#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "orl/core/env.hpp"
#include "orl/core/errors.hpp"
#include "orl/core/rng.hpp"
#include "orl/vrp/city.hpp"

namespace orl::vrp {

enum class OrderStatus { Inactive, Open, Accepted, PickedUp, Delivered, Expired };

inline bool is_live(OrderStatus s) {
  return s == OrderStatus::Open || s == OrderStatus::Accepted || s == OrderStatus::PickedUp;
}

struct Order {
  std::int64_t id = -1;
  int restaurant = 0;
  Cell pickup;
  Cell delivery;
  std::size_t zone = 0;
  double value = 0.0;
  OrderStatus status = OrderStatus::Inactive;
  int elapsed = 0;
  double credited = 0.0;  // shaping reward paid out so far
};

// Orders live in a fixed array of max_orders slots; a slot is free once its
// order is delivered or expired.
struct VrpState {
  std::vector<Cell> restaurants;
  Cell driver;
  int capacity_left = 0;
  std::vector<Order> orders;
  int t = 0;

  int picked_up_count() const {
    return static_cast<int>(std::count_if(orders.begin(), orders.end(),
                                          [](const Order& o) { return o.status == OrderStatus::PickedUp; }));
  }
};

enum class ActionKind { Accept, Pickup, Deliver, GoToPickup, Wait };

struct VrpAction {
  ActionKind kind = ActionKind::Wait;
  int index = 0;
  friend bool operator==(const VrpAction&, const VrpAction&) = default;
};

// Flat layout: [accept x M][pickup x M][deliver x M][go-to-restaurant x R][wait].
inline int encode(const CityConfig& c, VrpAction a) {
  switch (a.kind) {
    case ActionKind::Accept: return a.index;
    case ActionKind::Pickup: return c.max_orders + a.index;
    case ActionKind::Deliver: return 2 * c.max_orders + a.index;
    case ActionKind::GoToPickup: return 3 * c.max_orders + a.index;
    case ActionKind::Wait: return 3 * c.max_orders + c.n_pickup;
  }
  return 3 * c.max_orders + c.n_pickup;
}

inline VrpAction decode(const CityConfig& c, int action) {
  const int m = c.max_orders;
  if (action < 0 || action > 3 * m + c.n_pickup)
    throw InfeasibleAction("vrp: action index " + std::to_string(action) + " out of range");
  if (action < m) return {ActionKind::Accept, action};
  if (action < 2 * m) return {ActionKind::Pickup, action - m};
  if (action < 3 * m) return {ActionKind::Deliver, action - 2 * m};
  if (action < 3 * m + c.n_pickup) return {ActionKind::GoToPickup, action - 3 * m};
  return {ActionKind::Wait, 0};
}

inline std::vector<bool> action_mask(const CityConfig& c, const VrpState& s) {
  std::vector<bool> mask(c.action_count(), false);
  for (int i = 0; i < c.max_orders; ++i) {
    const auto status = s.orders[static_cast<std::size_t>(i)].status;
    mask[static_cast<std::size_t>(encode(c, {ActionKind::Accept, i}))] = status == OrderStatus::Open;
    mask[static_cast<std::size_t>(encode(c, {ActionKind::Pickup, i}))] =
        status == OrderStatus::Accepted && s.capacity_left > 0;
    mask[static_cast<std::size_t>(encode(c, {ActionKind::Deliver, i}))] = status == OrderStatus::PickedUp;
  }
  for (int j = 0; j < c.n_pickup; ++j) mask[static_cast<std::size_t>(encode(c, {ActionKind::GoToPickup, j}))] = true;
  mask[static_cast<std::size_t>(encode(c, {ActionKind::Wait, 0}))] = true;
  return mask;
}

enum class EventKind { Arrived, Accepted, PickedUp, Delivered, Failed, TimedOut };

struct OrderEvent {
  EventKind kind;
  std::int64_t order_id;
  int slot;
  double amount;  // shaping credit (positive) or penalty (negative)
};

// Breakdown of the last step, for diagnostics and property checks.
struct StepInfo {
  int cells_moved = 0;
  double shaping = 0.0;
  double time_cost = 0.0;
  double move_cost = 0.0;
  double failure_cost = 0.0;
  std::vector<OrderEvent> events;
};

class VrpEnv {
 public:
  using Action = int;

  explicit VrpEnv(CityConfig config) : config_(std::move(config)), rng_(0, 0) { config_.validate(); }

  EnvStep reset(RngStream rng) {
    rng_ = std::move(rng);
    state_ = VrpState{};
    next_id_ = 0;
    info_ = StepInfo{};
    // Driver and restaurants occupy distinct cells.
    std::vector<int> cells(static_cast<std::size_t>(config_.cells()));
    for (int i = 0; i < config_.cells(); ++i) cells[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k <= config_.n_pickup; ++k) {
      const auto j = static_cast<std::size_t>(rng_.uniform_int(k, config_.cells() - 1));
      std::swap(cells[static_cast<std::size_t>(k)], cells[j]);
    }
    auto to_cell = [&](int id) { return Cell{id % config_.width, id / config_.width}; };
    state_.driver = to_cell(cells[0]);
    for (int k = 1; k <= config_.n_pickup; ++k) state_.restaurants.push_back(to_cell(cells[static_cast<std::size_t>(k)]));
    state_.capacity_left = config_.capacity;
    state_.orders.assign(static_cast<std::size_t>(config_.max_orders), Order{});
    return observe(0.0);
  }

  EnvStep step(Action action) {
    if (state_.t >= config_.episode_len) throw InfeasibleAction("vrp: episode already finished");
    const auto mask = action_mask(config_, state_);
    if (action < 0 || static_cast<std::size_t>(action) >= mask.size() || !mask[static_cast<std::size_t>(action)]) {
      std::ostringstream msg;
      msg << "vrp: action " << action << " is masked out at t=" << state_.t;
      throw InfeasibleAction(msg.str());
    }
    info_ = StepInfo{};
    const VrpAction a = decode(config_, action);
    const double third_paid = apply_action(a);

    info_.time_cost = config_.time_cost;
    info_.move_cost = config_.move_cost * info_.cells_moved;
    info_.shaping = third_paid;
    age_and_expire();
    maybe_spawn_order();
    state_.t += 1;

    const double reward = info_.shaping - (info_.time_cost + info_.move_cost + info_.failure_cost);
    return observe(reward);
  }

  std::size_t action_count() const { return config_.action_count(); }
  std::size_t observation_size() const {
    return 3 + 2 * static_cast<std::size_t>(config_.n_pickup) + 10 * static_cast<std::size_t>(config_.max_orders);
  }

  const VrpState& state() const { return state_; }
  const CityConfig& config() const { return config_; }
  const StepInfo& last_step() const { return info_; }

  std::vector<double> observation() const {
    const double sx = config_.width > 1 ? 1.0 / (config_.width - 1) : 1.0;
    const double sy = config_.height > 1 ? 1.0 / (config_.height - 1) : 1.0;
    double value_scale = 0.0;
    for (const auto& r : config_.zone_values) value_scale = std::max(value_scale, r.max);
    std::vector<double> obs;
    obs.reserve(observation_size());
    obs.push_back(state_.driver.x * sx);
    obs.push_back(state_.driver.y * sy);
    obs.push_back(static_cast<double>(state_.capacity_left) / config_.capacity);
    for (const auto& r : state_.restaurants) {
      obs.push_back(r.x * sx);
      obs.push_back(r.y * sy);
    }
    for (const auto& o : state_.orders) {
      const bool live = is_live(o.status);
      obs.push_back(o.status == OrderStatus::Open ? 1.0 : 0.0);
      obs.push_back(o.status == OrderStatus::Accepted ? 1.0 : 0.0);
      obs.push_back(o.status == OrderStatus::PickedUp ? 1.0 : 0.0);
      obs.push_back(live ? 0.0 : 1.0);
      obs.push_back(live ? o.pickup.x * sx : 0.0);
      obs.push_back(live ? o.pickup.y * sy : 0.0);
      obs.push_back(live ? o.delivery.x * sx : 0.0);
      obs.push_back(live ? o.delivery.y * sy : 0.0);
      obs.push_back(live && config_.time_window > 0 ? static_cast<double>(o.elapsed) / config_.time_window : 0.0);
      obs.push_back(live ? o.value / value_scale : 0.0);
    }
    return obs;
  }

  // Test hook: place an order into a free slot directly. Returns the slot.
  int inject_order(int restaurant, Cell delivery, double value, std::size_t zone = 0) {
    for (std::size_t i = 0; i < state_.orders.size(); ++i) {
      if (is_live(state_.orders[i].status)) continue;
      Order o;
      o.id = next_id_++;
      o.restaurant = restaurant;
      o.pickup = state_.restaurants.at(static_cast<std::size_t>(restaurant));
      o.delivery = delivery;
      o.zone = zone;
      o.value = value;
      o.status = OrderStatus::Open;
      state_.orders[i] = o;
      return static_cast<int>(i);
    }
    return -1;
  }
  VrpState& mutable_state() { return state_; }

 private:
  // Value split in thirds; the last third absorbs rounding so the three
  // credits sum to the value exactly.
  static double credit(Order& o, int part) {
    const double third = o.value / 3.0;
    const double amount = part < 2 ? third : o.value - 2.0 * third;
    o.credited += amount;
    return amount;
  }

  void move_toward(Cell target) {
    const Cell next = step_toward(state_.driver, target);
    info_.cells_moved = manhattan(next, state_.driver);
    state_.driver = next;
  }

  double apply_action(VrpAction a) {
    switch (a.kind) {
      case ActionKind::Accept: {
        Order& o = state_.orders[static_cast<std::size_t>(a.index)];
        o.status = OrderStatus::Accepted;
        const double c = credit(o, 0);
        info_.events.push_back({EventKind::Accepted, o.id, a.index, c});
        return c;
      }
      case ActionKind::Pickup: {
        Order& o = state_.orders[static_cast<std::size_t>(a.index)];
        move_toward(o.pickup);
        if (state_.driver == o.pickup) {
          o.status = OrderStatus::PickedUp;
          state_.capacity_left -= 1;
          const double c = credit(o, 1);
          info_.events.push_back({EventKind::PickedUp, o.id, a.index, c});
          return c;
        }
        return 0.0;
      }
      case ActionKind::Deliver: {
        Order& o = state_.orders[static_cast<std::size_t>(a.index)];
        move_toward(o.delivery);
        if (state_.driver == o.delivery) {
          o.status = OrderStatus::Delivered;
          state_.capacity_left += 1;
          const double c = credit(o, 2);
          info_.events.push_back({EventKind::Delivered, o.id, a.index, c});
          return c;
        }
        return 0.0;
      }
      case ActionKind::GoToPickup:
        move_toward(state_.restaurants[static_cast<std::size_t>(a.index)]);
        return 0.0;
      case ActionKind::Wait:
        return 0.0;
    }
    return 0.0;
  }

  void age_and_expire() {
    for (std::size_t i = 0; i < state_.orders.size(); ++i) {
      Order& o = state_.orders[i];
      if (!is_live(o.status)) continue;
      o.elapsed += 1;
      const bool late = o.elapsed > config_.time_window;
      if (o.status == OrderStatus::Open) {
        if (late || rng_.bernoulli(config_.timeout_prob)) {
          o.status = OrderStatus::Expired;
          info_.events.push_back({EventKind::TimedOut, o.id, static_cast<int>(i), 0.0});
        }
      } else if (late) {
        if (o.status == OrderStatus::PickedUp) state_.capacity_left += 1;
        o.status = OrderStatus::Expired;
        info_.failure_cost += config_.failure_penalty;
        info_.events.push_back({EventKind::Failed, o.id, static_cast<int>(i), -config_.failure_penalty});
      }
    }
  }

  void maybe_spawn_order() {
    if (!rng_.bernoulli(config_.order_prob)) return;
    auto free_slot = std::find_if(state_.orders.begin(), state_.orders.end(),
                                  [](const Order& o) { return !is_live(o.status); });
    if (free_slot == state_.orders.end()) return;
    Order o;
    o.id = next_id_++;
    o.zone = rng_.categorical(config_.zone_probs);
    o.restaurant = static_cast<int>(rng_.uniform_int(0, config_.n_pickup - 1));
    o.pickup = state_.restaurants[static_cast<std::size_t>(o.restaurant)];
    const auto cell = rng_.uniform_int(0, config_.cells() - 1);
    o.delivery = Cell{static_cast<int>(cell % config_.width), static_cast<int>(cell / config_.width)};
    o.value = sample_order_value(config_, o.zone, rng_);
    o.status = OrderStatus::Open;
    *free_slot = o;
    info_.events.push_back({EventKind::Arrived, o.id, static_cast<int>(free_slot - state_.orders.begin()), 0.0});
  }

  EnvStep observe(double reward) const {
    return EnvStep{observation(), reward, state_.t >= config_.episode_len, action_mask(config_, state_)};
  }

  CityConfig config_;
  VrpState state_;
  RngStream rng_;
  std::int64_t next_id_ = 0;
  StepInfo info_;
};

}  // namespace orl::vrp
