#pragma once

#include <concepts>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "orl/core/rng.hpp"

namespace orl {

// What an environment hands back after reset() or step().
// action_mask has one entry per action; continuous-action environments
// report a single always-true entry.
struct EnvStep {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  std::vector<bool> action_mask;
};

// Environments own their RNG stream: reset() takes it by value and step()
// draws from it.
template <class E>
concept Environment = requires(E& env, const E& cenv, RngStream rng,
                               const typename E::Action& action) {
  typename E::Action;
  { env.reset(rng) } -> std::same_as<EnvStep>;
  { env.step(action) } -> std::same_as<EnvStep>;
  { cenv.action_count() } -> std::convertible_to<std::size_t>;
};

template <class E>
concept DiscreteEnvironment = Environment<E> && std::integral<typename E::Action>;

template <class P, class E>
concept PolicyFor = Environment<E> && requires(P& policy, const E& env, const EnvStep& step) {
  { policy(env, step) } -> std::convertible_to<typename E::Action>;
};

inline bool any_allowed(const std::vector<bool>& mask) {
  for (bool b : mask)
    if (b) return true;
  return false;
}

}  // namespace orl
