#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "orl/core/env.hpp"
#include "orl/core/errors.hpp"
#include "orl/core/rng.hpp"
#include "orl/core/stats.hpp"

namespace orl {

struct EpisodeOptions {
  bool record_rewards = false;
};

// Resets env with rng, then steps it under policy until done.
// A policy that picks a masked-out action is a hard error.
template <Environment Env, class Policy>
  requires PolicyFor<Policy, Env>
EpisodeResult run_episode(Env& env, Policy& policy, RngStream rng, EpisodeOptions options = {}) {
  EpisodeResult result;
  result.master_seed = rng.master_seed();
  result.stream_index = rng.stream_index();
  EnvStep step = env.reset(std::move(rng));
  while (!step.done) {
    const typename Env::Action action = policy(std::as_const(env), std::as_const(step));
    if constexpr (DiscreteEnvironment<Env>) {
      const bool in_range = action >= 0 && static_cast<std::size_t>(action) < step.action_mask.size();
      if (!in_range || !step.action_mask[static_cast<std::size_t>(action)]) {
        std::ostringstream msg;
        msg << "policy chose masked-out action " << action << " at step " << result.steps;
        throw InfeasibleAction(msg.str());
      }
    }
    step = env.step(action);
    if (!std::isfinite(step.reward)) {
      std::ostringstream msg;
      msg << "non-finite reward at step " << result.steps;
      throw std::runtime_error(msg.str());
    }
    result.total_reward += step.reward;
    if (options.record_rewards) result.per_step_rewards.push_back(step.reward);
    ++result.steps;
  }
  return result;
}

// Calls body(i) for i in [0, n) on up to `workers` threads. Indices are
// handed out dynamically; body must write only to slot i.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  const auto count = static_cast<unsigned>(std::clamp<std::size_t>(std::min<std::size_t>(workers, n), 1, 256));
  if (count == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
}

struct RunOptions {
  unsigned workers = 1;
  bool record_rewards = false;
};

// Runs episodes 0..n-1 on streams (master_seed, i). make_env() builds a
// fresh environment, make_policy(RngStream) a fresh policy whose stream is
// forked from the episode's stream. Output order and values do not depend
// on the worker count.
template <class MakeEnv, class MakePolicy>
std::vector<EpisodeResult> run_episodes(MakeEnv&& make_env, MakePolicy&& make_policy,
                                        std::size_t n_episodes, std::uint64_t master_seed,
                                        RunOptions options = {}) {
  if (n_episodes == 0) throw std::invalid_argument("run_episodes: n_episodes must be >= 1");
  std::vector<EpisodeResult> results(n_episodes);
  std::vector<std::exception_ptr> errors(n_episodes);
  parallel_for(n_episodes, options.workers, [&](std::size_t i) {
    try {
      RngStream rng(master_seed, i);
      auto env = make_env();
      auto policy = make_policy(rng.fork(1));
      results[i] = run_episode(env, policy, rng, EpisodeOptions{options.record_rewards});
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });

  for (std::size_t i = 0; i < n_episodes; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw EpisodeError(i, e.what());
    }
  }
  return results;
}

template <class MakeEnv, class MakePolicy>
BenchmarkReport run_benchmark(MakeEnv&& make_env, MakePolicy&& make_policy,
                              std::size_t n_episodes, std::uint64_t master_seed,
                              RunOptions options = {}) {
  const auto results = run_episodes(make_env, make_policy, n_episodes, master_seed, options);
  return summarize(results);
}

}  // namespace orl
