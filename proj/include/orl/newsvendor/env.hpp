#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "orl/core/env.hpp"
#include "orl/core/errors.hpp"
#include "orl/core/rng.hpp"

namespace orl::newsvendor {

struct EconomicParams {
  double price = 0.0;
  double cost = 0.0;
  double holding = 0.0;
  double penalty = 0.0;  // lost-sales goodwill cost per unit
  double mean_demand = 0.0;
};

// Price/cost/holding/penalty/mean used for policy-slice studies.
inline EconomicParams slice_params() { return {50.0, 25.0, 0.5, 5.0, 100.0}; }

struct NewsvendorConfig {
  int lead_time = 5;
  int horizon = 40;
  double discount = 1.0;
  double price_max = 100.0;
  double holding_max = 5.0;
  double penalty_max = 10.0;
  double mean_demand_max = 200.0;
  std::optional<EconomicParams> fixed;
  // Scale for normalised [0,1] learner actions.
  double max_order = 800.0;

  void validate() const {
    if (lead_time < 1) throw ConfigError("newsvendor: lead time must be >= 1");
    if (horizon < 1) throw ConfigError("newsvendor: horizon must be >= 1");
    if (!(discount > 0.0 && discount <= 1.0)) throw ConfigError("newsvendor: discount must be in (0,1]");
    if (price_max < 0 || holding_max < 0 || penalty_max < 0 || mean_demand_max < 0)
      throw ConfigError("newsvendor: parameter ranges must be non-negative");
    if (!(max_order > 0.0)) throw ConfigError("newsvendor: max_order must be positive");
    if (fixed) {
      const auto& p = *fixed;
      if (p.price < 0 || p.cost < 0 || p.holding < 0 || p.penalty < 0 || p.mean_demand < 0)
        throw ConfigError("newsvendor: fixed parameters must be non-negative");
    }
  }
};

// pipeline[0] is on hand, pipeline[i] arrives i periods from now.
struct NewsvendorState {
  EconomicParams params;
  std::vector<std::int64_t> pipeline;
  int t = 0;
  int horizon = 0;
  double discount = 1.0;

  std::int64_t inventory_position() const {
    return std::accumulate(pipeline.begin(), pipeline.end(), std::int64_t{0});
  }
};

struct Transition {
  double reward = 0.0;
  std::int64_t sold = 0;
  std::int64_t leftover = 0;
  std::int64_t lost = 0;
};

// Applies an integer order and a demand realisation. Unmet demand is lost.
inline Transition apply_demand(NewsvendorState& s, std::int64_t order, std::int64_t demand) {
  const auto& p = s.params;
  const std::int64_t on_hand = s.pipeline.front();
  Transition tr;
  tr.sold = std::min(on_hand, demand);
  tr.leftover = std::max<std::int64_t>(on_hand - demand, 0);
  tr.lost = std::max<std::int64_t>(demand - on_hand, 0);
  tr.reward = p.price * static_cast<double>(tr.sold) - p.cost * static_cast<double>(order) -
              p.holding * static_cast<double>(tr.leftover) - p.penalty * static_cast<double>(tr.lost);

  const std::size_t l = s.pipeline.size();
  if (l == 1) {
    s.pipeline[0] = tr.leftover + order;
  } else {
    s.pipeline[0] = tr.leftover + s.pipeline[1];
    for (std::size_t i = 1; i + 1 < l; ++i) s.pipeline[i] = s.pipeline[i + 1];
    s.pipeline[l - 1] = order;
  }
  return tr;
}

// Rounds half to even; negative or NaN quantities become 0.
inline std::int64_t round_order(double q) {
  if (!(q > 0.0)) return 0;
  return static_cast<std::int64_t>(std::nearbyint(q));
}

class NewsvendorEnv {
 public:
  using Action = double;

  explicit NewsvendorEnv(NewsvendorConfig config) : config_(std::move(config)), rng_(0, 0) {
    config_.validate();
  }

  EnvStep reset(RngStream rng) {
    rng_ = std::move(rng);
    state_ = NewsvendorState{};
    state_.params = config_.fixed ? *config_.fixed : sample_params();
    state_.pipeline.assign(static_cast<std::size_t>(config_.lead_time), 0);
    state_.horizon = config_.horizon;
    state_.discount = config_.discount;
    return observe(0.0);
  }

  EnvStep step(Action quantity) {
    if (state_.t >= state_.horizon) throw InfeasibleAction("newsvendor: episode already finished");
    if (!(quantity >= 0.0)) ++clamped_actions_;
    const std::int64_t order = round_order(quantity);
    const std::int64_t demand = rng_.poisson(state_.params.mean_demand);
    last_demand_ = demand;
    const Transition tr = apply_demand(state_, order, demand);
    state_.t += 1;
    return observe(tr.reward);
  }

  std::size_t action_count() const { return 1; }
  std::size_t observation_size() const { return 5 + static_cast<std::size_t>(config_.lead_time); }

  const NewsvendorState& state() const { return state_; }
  const NewsvendorConfig& config() const { return config_; }
  std::int64_t last_demand() const { return last_demand_; }
  // Number of negative (or NaN) order quantities clamped to zero so far.
  std::size_t clamped_actions() const { return clamped_actions_; }

  std::vector<double> observation() const {
    const auto& p = state_.params;
    auto norm = [](double v, double range) { return range > 0.0 ? v / range : v; };
    std::vector<double> obs{norm(p.price, config_.price_max), norm(p.cost, config_.price_max),
                            norm(p.holding, config_.holding_max), norm(p.penalty, config_.penalty_max),
                            norm(p.mean_demand, config_.mean_demand_max)};
    for (auto x : state_.pipeline) obs.push_back(static_cast<double>(x) / config_.max_order);
    return obs;
  }

 private:
  EconomicParams sample_params() {
    EconomicParams p;
    p.price = rng_.uniform(0.0, config_.price_max);
    p.cost = rng_.uniform(0.0, p.price);
    p.holding = rng_.uniform(0.0, std::min(p.cost, config_.holding_max));
    p.penalty = rng_.uniform(0.0, config_.penalty_max);
    p.mean_demand = rng_.uniform(0.0, config_.mean_demand_max);
    return p;
  }

  EnvStep observe(double reward) const {
    return EnvStep{observation(), reward, state_.t >= state_.horizon, {true}};
  }

  NewsvendorConfig config_;
  NewsvendorState state_;
  RngStream rng_;
  std::int64_t last_demand_ = 0;
  std::size_t clamped_actions_ = 0;
};

}  // namespace orl::newsvendor
