#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orl/core/errors.hpp"
#include "orl/core/rng.hpp"

namespace orl::vrp {

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

inline int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// One cell toward target, x-axis first.
inline Cell step_toward(Cell from, Cell target) {
  if (from.x != target.x) return {from.x + (target.x > from.x ? 1 : -1), from.y};
  if (from.y != target.y) return {from.x, from.y + (target.y > from.y ? 1 : -1)};
  return from;
}

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
};

struct CityConfig {
  int width = 5;
  int height = 5;
  int n_pickup = 2;
  std::vector<double> zone_probs{0.5, 0.3, 0.1, 0.1};
  std::vector<ValueRange> zone_values{{8.0, 12.0}, {5.0, 8.0}, {2.0, 5.0}, {1.0, 3.0}};
  double order_prob = 0.9;
  double timeout_prob = 0.15;
  int time_window = 60;
  int capacity = 4;
  double time_cost = 0.1;
  double move_cost = 0.1;
  double failure_penalty = 50.0;
  int max_orders = 5;
  int episode_len = 1000;

  int cells() const { return width * height; }
  std::size_t action_count() const {
    return static_cast<std::size_t>(3 * max_orders + n_pickup + 1);
  }

  void validate() const {
    if (width < 1 || height < 1) throw ConfigError("vrp: map dimensions must be positive");
    if (n_pickup < 1) throw ConfigError("vrp: need at least one pickup location");
    if (n_pickup + 1 > cells())
      throw ConfigError("vrp: " + std::to_string(n_pickup) + " pickup locations plus the driver do not fit a " +
                        std::to_string(width) + "x" + std::to_string(height) + " map");
    if (zone_probs.empty() || zone_probs.size() != zone_values.size())
      throw ConfigError("vrp: zone probabilities and value ranges must have equal, non-zero length");
    double total = 0.0;
    for (double p : zone_probs) {
      if (!(p >= 0.0)) throw ConfigError("vrp: zone probabilities must be non-negative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("vrp: zone probabilities must sum to 1");
    for (const auto& r : zone_values)
      if (!(r.min < r.max)) throw ConfigError("vrp: zone value ranges need min < max");
    if (!(order_prob >= 0.0 && order_prob <= 1.0)) throw ConfigError("vrp: order_prob must be in [0,1]");
    if (!(timeout_prob >= 0.0 && timeout_prob <= 1.0)) throw ConfigError("vrp: timeout_prob must be in [0,1]");
    if (time_window < 0) throw ConfigError("vrp: time window must be non-negative");
    if (capacity < 1) throw ConfigError("vrp: capacity must be positive");
    if (time_cost < 0 || move_cost < 0 || failure_penalty < 0) throw ConfigError("vrp: costs must be >= 0");
    if (max_orders < 1) throw ConfigError("vrp: max_orders must be positive");
    if (episode_len < 1) throw ConfigError("vrp: episode length must be positive");
  }
};

// Normal centred on the range midpoint with sd = range/4, rejected outside [min, max].
inline double sample_order_value(const ValueRange& range, RngStream& rng) {
  const double mean = 0.5 * (range.min + range.max);
  const double sd = 0.25 * (range.max - range.min);
  for (;;) {
    const double v = rng.normal(mean, sd);
    if (v >= range.min && v <= range.max) return v;
  }
}

inline double sample_order_value(const CityConfig& config, std::size_t zone, RngStream& rng) {
  if (zone >= config.zone_values.size()) throw std::out_of_range("vrp: zone index out of range");
  return sample_order_value(config.zone_values[zone], rng);
}

namespace presets {

inline std::vector<double> hot_zone_probs() { return {0.1, 0.5, 0.3, 0.1}; }

struct Named {
  std::string name;
  CityConfig config;
};

// {5x5, 8x8} maps x {5, 10} orders x {2, 3} pickups, each also in a
// shifted hot-zone variant suffixed "-hot".
inline std::vector<Named> all() {
  std::vector<Named> out;
  for (int size : {5, 8})
    for (int orders : {5, 10})
      for (int pickups : {2, 3})
        for (bool hot : {false, true}) {
          CityConfig c;
          c.width = c.height = size;
          c.max_orders = orders;
          c.n_pickup = pickups;
          if (hot) c.zone_probs = hot_zone_probs();
          out.push_back({std::to_string(size) + "x" + std::to_string(size) + "-o" + std::to_string(orders) +
                             "-p" + std::to_string(pickups) + (hot ? "-hot" : ""),
                         c});
        }
  return out;
}

inline std::optional<CityConfig> find(std::string_view name) {
  for (auto& p : all())
    if (p.name == name) return p.config;
  return std::nullopt;
}

}  // namespace presets
}  // namespace orl::vrp
