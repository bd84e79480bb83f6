#pragma once

#include <cstdint>
#include <sstream>
#include <vector>

#include "orl/binpack/distribution.hpp"
#include "orl/core/env.hpp"
#include "orl/core/errors.hpp"
#include "orl/core/rng.hpp"

namespace orl::binpack {

// counts[h] is the number of open bins at level h for h in 1..B-1; counts[0]
// is always zero and full bins are only tallied in closed_bins.
struct BinPackState {
  int bin_size = 0;
  int current_item = 0;
  std::size_t current_type = 0;
  std::vector<std::int64_t> counts;
  int t = 0;
  int horizon = 0;
  std::int64_t closed_bins = 0;

  std::int64_t count(int level) const {
    return level >= 1 && level < bin_size ? counts[static_cast<std::size_t>(level)] : 0;
  }
};

// Total empty space in open bins, sum_h N_h (B - h).
inline std::int64_t waste(const BinPackState& s) {
  std::int64_t w = 0;
  for (int h = 1; h < s.bin_size; ++h) w += s.count(h) * (s.bin_size - h);
  return w;
}

inline bool placement_allowed(const BinPackState& s, int level) {
  if (level == 0) return true;
  if (level < 0 || level >= s.bin_size) return false;
  return s.count(level) > 0 && level + s.current_item <= s.bin_size;
}

inline std::vector<bool> action_mask(const BinPackState& s) {
  std::vector<bool> mask(static_cast<std::size_t>(s.bin_size), false);
  for (int h = 0; h < s.bin_size; ++h) mask[static_cast<std::size_t>(h)] = placement_allowed(s, h);
  return mask;
}

// Places the current item at `level` (0 = new bin) and returns the reward,
// the negative change in waste. Does not advance time or draw a new item.
inline double place_item(BinPackState& s, int level) {
  if (!placement_allowed(s, level)) {
    std::ostringstream msg;
    msg << "bin packing: level " << level << " cannot take an item of size " << s.current_item;
    throw InfeasibleAction(msg.str());
  }
  const int item = s.current_item;
  if (level == 0) {
    s.counts[static_cast<std::size_t>(item)] += 1;
    return -static_cast<double>(s.bin_size - item);
  }
  s.counts[static_cast<std::size_t>(level)] -= 1;
  const int filled = level + item;
  if (filled < s.bin_size)
    s.counts[static_cast<std::size_t>(filled)] += 1;
  else
    s.closed_bins += 1;
  return static_cast<double>(item);
}

class BinPackEnv {
 public:
  using Action = int;

  explicit BinPackEnv(BinPackConfig config) : config_(std::move(config)), rng_(0, 0) {
    config_.validate();
  }

  EnvStep reset(RngStream rng) {
    rng_ = std::move(rng);
    state_ = BinPackState{};
    state_.bin_size = config_.bin_size;
    state_.horizon = config_.horizon;
    state_.counts.assign(static_cast<std::size_t>(config_.bin_size), 0);
    draw_item();
    return observe(0.0);
  }

  EnvStep step(Action level) {
    if (state_.t >= state_.horizon) throw InfeasibleAction("bin packing: episode already finished");
    const double reward = place_item(state_, level);
    state_.t += 1;
    if (state_.t < state_.horizon) draw_item();
    return observe(reward);
  }

  std::size_t action_count() const { return static_cast<std::size_t>(config_.bin_size); }
  std::size_t observation_size() const {
    return config_.items.sizes.size() + static_cast<std::size_t>(config_.bin_size - 1);
  }

  const BinPackState& state() const { return state_; }
  const BinPackConfig& config() const { return config_; }

  // One-hot item type followed by N_h / T for h = 1..B-1.
  std::vector<double> observation() const {
    std::vector<double> obs(observation_size(), 0.0);
    obs[state_.current_type] = 1.0;
    const std::size_t offset = config_.items.sizes.size();
    const double scale = 1.0 / static_cast<double>(config_.horizon);
    for (int h = 1; h < config_.bin_size; ++h)
      obs[offset + static_cast<std::size_t>(h - 1)] = static_cast<double>(state_.count(h)) * scale;
    return obs;
  }

 private:
  void draw_item() {
    state_.current_type = rng_.categorical(config_.items.probs);
    state_.current_item = config_.items.sizes[state_.current_type];
  }

  EnvStep observe(double reward) const {
    return EnvStep{observation(), reward, state_.t >= state_.horizon, action_mask(state_)};
  }

  BinPackConfig config_;
  BinPackState state_;
  RngStream rng_;
};

}  // namespace orl::binpack
