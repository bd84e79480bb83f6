#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "orl/core/env.hpp"
#include "orl/learn/masked.hpp"
#include "orl/learn/mlp.hpp"
#include "orl/newsvendor/env.hpp"

namespace orl::learn {

enum class HeadKind { Categorical, Gaussian };

// How network outputs become a distribution over actions.
// Categorical: outputs are logits, masked before the softmax.
// Gaussian: sigmoid(output[0]) is the mean of N(mean, sigma^2) on the
// normalised [0,1] action scale; the environment sees the clipped draw.
struct PolicyHead {
  HeadKind kind = HeadKind::Categorical;
  double sigma = 0.1;

  struct LogProb {
    double value = 0.0;
    std::vector<double> grad_output;  // d log pi / d output
    double entropy = 0.0;
    std::vector<double> entropy_grad;  // d H / d output (categorical only)
  };

  LogProb log_prob(std::span<const double> output, double action, const std::vector<bool>& mask) const {
    LogProb lp;
    lp.grad_output.assign(output.size(), 0.0);
    lp.entropy_grad.assign(output.size(), 0.0);
    if (kind == HeadKind::Categorical) {
      const auto probs = masked_softmax(output, mask);
      const auto a = static_cast<std::size_t>(action);
      lp.value = std::log(probs[a]);
      for (std::size_t k = 0; k < output.size(); ++k) lp.grad_output[k] = (k == a ? 1.0 : 0.0) - probs[k];
      for (std::size_t k = 0; k < output.size(); ++k)
        if (probs[k] > 0.0) lp.entropy -= probs[k] * std::log(probs[k]);
      for (std::size_t k = 0; k < output.size(); ++k)
        if (probs[k] > 0.0) lp.entropy_grad[k] = -probs[k] * (std::log(probs[k]) + lp.entropy);
    } else {
      const double mean = 1.0 / (1.0 + std::exp(-output[0]));
      const double z = (action - mean) / sigma;
      lp.value = -0.5 * z * z - std::log(sigma * std::sqrt(2.0 * std::numbers::pi));
      lp.grad_output[0] = z / sigma * mean * (1.0 - mean);
      lp.entropy = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
    }
    return lp;
  }
};

// Continuous-action scale per environment; only the newsvendor has one.
inline double action_scale(const newsvendor::NewsvendorEnv& env) { return env.config().max_order; }

// A network plus head acting in an environment. Stochastic mode samples;
// greedy mode takes the most likely allowed action (or the Gaussian mean).
// The raw draw of the last call is kept so a trainer can log it.
template <class Env>
class LearnedPolicy {
 public:
  LearnedPolicy(const Mlp& net, PolicyHead head, RngStream rng, bool stochastic = true)
      : net_(&net), head_(head), rng_(std::move(rng)), stochastic_(stochastic) {}

  typename Env::Action operator()(const Env& env, const EnvStep& step) {
    const auto out = net_->forward(step.observation);
    if constexpr (DiscreteEnvironment<Env>) {
      const auto probs = masked_softmax(out, step.action_mask);
      int a;
      if (stochastic_) {
        a = sample_index(probs, rng_);
      } else {
        a = static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
      }
      last_raw_ = a;
      return a;
    } else {
      const double mean = 1.0 / (1.0 + std::exp(-out[0]));
      const double u = stochastic_ ? rng_.normal(mean, head_.sigma) : mean;
      last_raw_ = u;
      return std::clamp(u, 0.0, 1.0) * action_scale(env);
    }
  }

  double last_raw_action() const { return last_raw_; }

 private:
  const Mlp* net_;
  PolicyHead head_;
  RngStream rng_;
  bool stochastic_;
  double last_raw_ = 0.0;
};

}  // namespace orl::learn
