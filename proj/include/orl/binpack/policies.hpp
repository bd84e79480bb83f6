#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "orl/binpack/env.hpp"
#include "orl/core/runner.hpp"

namespace orl::binpack {

// Highest open level that still fits the item, or 0 (new bin).
inline int best_fit(const BinPackState& s) {
  for (int h = s.bin_size - s.current_item; h >= 1; --h)
    if (s.count(h) > 0) return h;
  return 0;
}

enum class TieBreak { Largest, Smallest };

// Sum-of-squares rule in its difference form: minimise N_{h+s} - N_h over
// the new-bin action and every feasible open level, with N_0 = N_B = 0.
inline int sum_of_squares(const BinPackState& s, TieBreak tie = TieBreak::Largest) {
  const int item = s.current_item;
  int best_level = 0;
  std::int64_t best_value = s.count(item);  // h = 0: N_s - N_0
  for (int h = 1; h + item <= s.bin_size; ++h) {
    if (s.count(h) == 0) continue;
    const std::int64_t value = s.count(h + item) - s.count(h);
    if (value < best_value || (value == best_value && tie == TieBreak::Largest)) {
      best_value = value;
      best_level = h;
    }
  }
  return best_level;
}

struct BestFitPolicy {
  int operator()(const BinPackEnv& env, const EnvStep&) const { return best_fit(env.state()); }
};

struct SumOfSquaresPolicy {
  TieBreak tie = TieBreak::Largest;
  int operator()(const BinPackEnv& env, const EnvStep&) const {
    return sum_of_squares(env.state(), tie);
  }
};

// Least-squares slope of log E[waste] against log T, where waste is the
// negated mean episode reward at each horizon.
template <class MakePolicy>
double waste_growth_slope(MakePolicy&& make_policy, const BinPackConfig& base,
                          std::span<const int> horizons, std::size_t episodes_per_horizon,
                          std::uint64_t master_seed, unsigned workers = 1) {
  if (horizons.size() < 2) throw std::invalid_argument("waste_growth_slope: need >= 2 horizons");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1])
      throw std::invalid_argument("waste_growth_slope: horizons must be strictly increasing");

  std::vector<double> xs, ys;
  for (int horizon : horizons) {
    BinPackConfig cfg = base;
    cfg.horizon = horizon;
    const auto report = run_benchmark([&] { return BinPackEnv(cfg); }, make_policy,
                                      episodes_per_horizon, master_seed, RunOptions{workers});
    const double mean_waste = -report.mean;
    if (!(mean_waste > 0.0))
      throw std::domain_error("waste_growth_slope: non-positive mean waste at horizon " +
                              std::to_string(horizon));
    xs.push_back(std::log(static_cast<double>(horizon)));
    ys.push_back(std::log(mean_waste));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace orl::binpack
