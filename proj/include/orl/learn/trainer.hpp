#pragma once

#include <algorithm>
#include <chrono>
#include <exception>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "orl/core/env.hpp"
#include "orl/core/errors.hpp"
#include "orl/core/runner.hpp"
#include "orl/learn/checkpoint.hpp"
#include "orl/learn/policy.hpp"
#include "orl/learn/policy_gradient.hpp"

namespace orl::learn {

template <Environment Env>
constexpr HeadKind head_kind_for() {
  return DiscreteEnvironment<Env> ? HeadKind::Categorical : HeadKind::Gaussian;
}

// Plays one episode with the stochastic policy, recording every decision.
template <Environment Env>
Trajectory collect_episode(Env& env, const Mlp& net, const PolicyHead& head, RngStream env_rng,
                           RngStream policy_rng) {
  Trajectory traj;
  EnvStep step = env.reset(std::move(env_rng));
  while (!step.done) {
    Decision d;
    d.observation = step.observation;
    d.mask = step.action_mask;
    const auto out = net.forward(d.observation);
    typename Env::Action action;
    if constexpr (DiscreteEnvironment<Env>) {
      const int a = sample_index(masked_softmax(out, d.mask), policy_rng);
      d.action = a;
      action = a;
    } else {
      const double mean = 1.0 / (1.0 + std::exp(-out[0]));
      d.action = policy_rng.normal(mean, head.sigma);
      action = std::clamp(d.action, 0.0, 1.0) * action_scale(env);
    }
    d.log_prob = head.log_prob(out, d.action, d.mask).value;
    step = env.step(action);
    d.reward = step.reward;
    traj.push_back(std::move(d));
  }
  return traj;
}

struct CurvePoint {
  int iteration = 0;
  double mean_reward = 0.0;
  double min_reward = 0.0;
  double max_reward = 0.0;
};

struct TrainBudget {
  int iterations = 100;
  std::optional<double> seconds;  // wall-clock cap; makes the run timing dependent
};

struct TrainResult {
  Checkpoint state;
  std::vector<CurvePoint> curve;
};

// Builds a fresh network sized for env with the configured hidden layers.
template <Environment Env>
Checkpoint initial_state(const Env& probe_env, std::size_t observation_size, const TrainerConfig& config,
                         std::uint64_t master_seed) {
  std::vector<int> sizes{static_cast<int>(observation_size)};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(DiscreteEnvironment<Env> ? static_cast<int>(probe_env.action_count()) : 1);
  RngStream init(master_seed, ~std::uint64_t{0});
  Checkpoint ck;
  ck.net = Mlp::random(std::move(sizes), init);
  ck.head.kind = head_kind_for<Env>();
  ck.head.sigma = config.sigma;
  ck.adam.learning_rate = config.learning_rate;
  return ck;
}

// Collect/update loop. Iteration i plays episodes on streams
// (master_seed, i * batch + e), so a run resumed from a checkpoint taken
// after iteration i continues exactly as the uninterrupted run would.
// on_iteration is called after each update with the new state.
template <class MakeEnv>
TrainResult train(MakeEnv&& make_env, const TrainerConfig& config, TrainBudget budget, std::uint64_t master_seed,
                  unsigned workers = 1, std::optional<Checkpoint> resume = std::nullopt,
                  const std::function<void(const Checkpoint&, const CurvePoint&)>& on_iteration = {}) {
  config.validate();
  if (budget.iterations < 0) throw std::invalid_argument("train: iterations must be >= 0");

  TrainResult result;
  if (resume) {
    result.state = std::move(*resume);
  } else {
    auto probe = make_env();
    const auto first = probe.reset(RngStream(master_seed, 0));
    result.state = initial_state(probe, first.observation.size(), config, master_seed);
  }
  Checkpoint& st = result.state;
  st.head.sigma = config.sigma;

  const auto batch = static_cast<std::size_t>(config.batch_episodes);
  const auto started = std::chrono::steady_clock::now();
  const int end = st.iteration + budget.iterations;
  while (st.iteration < end) {
    if (budget.seconds) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
      if (elapsed.count() >= *budget.seconds) break;
    }
    std::vector<Trajectory> trajectories(batch);
    std::vector<double> totals(batch, 0.0);
    std::vector<std::exception_ptr> errors(batch);
    const auto base = static_cast<std::uint64_t>(st.iteration) * batch;
    parallel_for(batch, workers, [&](std::size_t e) {
      try {
        RngStream rng(master_seed, base + e);
        auto env = make_env();
        trajectories[e] = collect_episode(env, st.net, st.head, rng, rng.fork(1));
        for (const auto& d : trajectories[e]) totals[e] += d.reward;
      } catch (...) {
        errors[e] = std::current_exception();
      }
    });
    for (std::size_t e = 0; e < batch; ++e) {
      if (!errors[e]) continue;
      try {
        std::rethrow_exception(errors[e]);
      } catch (const std::exception& ex) {
        throw EpisodeError(base + e, ex.what());
      }
    }

    CurvePoint point;
    point.iteration = st.iteration;
    double sum = 0.0;
    for (double t : totals) sum += t;
    point.mean_reward = sum / static_cast<double>(batch);
    point.min_reward = *std::min_element(totals.begin(), totals.end());
    point.max_reward = *std::max_element(totals.begin(), totals.end());

    const auto diag = policy_gradient_update(st.net, st.adam, st.head, trajectories, config);
    if (diag.aborted) throw std::runtime_error("update aborted at iteration " + std::to_string(st.iteration) + ": " + diag.error);
    ++st.iteration;
    result.curve.push_back(point);
    if (on_iteration) on_iteration(st, point);
  }
  return result;
}

}  // namespace orl::learn
