#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "orl/learn/mlp.hpp"
#include "orl/learn/policy.hpp"

namespace orl::learn {

struct TrainerConfig {
  double learning_rate = 3e-3;
  double gamma = 0.995;
  int batch_episodes = 16;
  double clip = 0.3;
  int epochs = 10;
  double entropy_coef = 0.0;
  double sigma = 0.1;
  std::vector<int> hidden{64, 32};

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
      throw std::invalid_argument("trainer: learning rate must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("trainer: gamma must be in (0, 1]");
    if (!(clip > 0.0)) throw std::invalid_argument("trainer: clip must be > 0");
    if (batch_episodes < 1) throw std::invalid_argument("trainer: batch must be >= 1 episode");
    if (epochs < 1) throw std::invalid_argument("trainer: epochs must be >= 1");
    if (!(entropy_coef >= 0.0)) throw std::invalid_argument("trainer: entropy coefficient must be >= 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("trainer: sigma must be > 0");
    for (int h : hidden)
      if (h < 1) throw std::invalid_argument("trainer: hidden sizes must be positive");
  }
};

// One decision as recorded during collection. `action` is the index for
// discrete heads and the unclipped normalised draw for the Gaussian head.
struct Decision {
  std::vector<double> observation;
  std::vector<bool> mask;
  double action = 0.0;
  double log_prob = 0.0;
  double reward = 0.0;
};

using Trajectory = std::vector<Decision>;

struct Sample {
  const Decision* decision = nullptr;
  double advantage = 0.0;
};

// Discounted return-to-go per decision, minus the batch mean, scaled to
// unit variance. A batch with constant returns gets all-zero advantages.
inline std::vector<Sample> make_samples(const std::vector<Trajectory>& batch, double gamma) {
  std::vector<Sample> samples;
  for (const auto& traj : batch) {
    const std::size_t first = samples.size();
    for (const auto& d : traj) samples.push_back({&d, 0.0});
    double g = 0.0;
    for (std::size_t k = traj.size(); k-- > 0;) {
      g = traj[k].reward + gamma * g;
      samples[first + k].advantage = g;
    }
  }
  if (samples.empty()) return samples;
  double mean = 0.0;
  for (const auto& s : samples) mean += s.advantage;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (const auto& s : samples) var += (s.advantage - mean) * (s.advantage - mean);
  const double sd = std::sqrt(var / static_cast<double>(samples.size()));
  const bool flat = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
  for (auto& s : samples) s.advantage = flat ? 0.0 : (s.advantage - mean) / sd;
  return samples;
}

// Mean clipped surrogate plus entropy bonus over the samples. With grad
// non-null, writes d objective / d params into it (resized and zeroed).
inline double surrogate(const Mlp& net, const PolicyHead& head, std::span<const Sample> samples,
                        double clip, double entropy_coef, std::vector<double>* grad) {
  if (grad) grad->assign(net.parameter_count(), 0.0);
  if (samples.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(samples.size());
  double total = 0.0;
  Mlp::Activations cache;
  std::vector<double> g_out;
  for (const auto& s : samples) {
    const Decision& d = *s.decision;
    const auto out = net.forward(d.observation, grad ? &cache : nullptr);
    const auto lp = head.log_prob(out, d.action, d.mask);
    const double ratio = std::exp(lp.value - d.log_prob);
    const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip);
    const double plain = ratio * s.advantage;
    const double capped = clipped * s.advantage;
    // Gradient flows through the ratio only when the unclipped term is the
    // active branch of the min.
    const bool through_ratio = plain <= capped;
    total += std::min(plain, capped) + entropy_coef * lp.entropy;
    if (!grad) continue;
    g_out.assign(out.size(), 0.0);
    if (through_ratio)
      for (std::size_t k = 0; k < out.size(); ++k) g_out[k] += s.advantage * ratio * lp.grad_output[k];
    if (entropy_coef != 0.0)
      for (std::size_t k = 0; k < out.size(); ++k) g_out[k] += entropy_coef * lp.entropy_grad[k];
    for (auto& v : g_out) v *= scale;
    net.backward(cache, g_out, *grad);
  }
  return total * scale;
}

// Masked softmax cross-entropy of target actions, averaged.
inline double masked_cross_entropy(const Mlp& net, std::span<const std::vector<double>> observations,
                                   std::span<const std::vector<bool>> masks, std::span<const int> targets,
                                   std::vector<double>* grad) {
  if (grad) grad->assign(net.parameter_count(), 0.0);
  if (observations.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(observations.size());
  PolicyHead head;
  double total = 0.0;
  Mlp::Activations cache;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto out = net.forward(observations[i], grad ? &cache : nullptr);
    const auto lp = head.log_prob(out, targets[i], masks[i]);
    total -= lp.value;
    if (!grad) continue;
    std::vector<double> g_out(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) g_out[k] = -lp.grad_output[k] * scale;
    net.backward(cache, g_out, *grad);
  }
  return total * scale;
}

struct UpdateDiagnostics {
  double mean_return = 0.0;
  double objective = 0.0;
  int epochs_run = 0;
  bool aborted = false;
  std::string error;
};

// Clipped-surrogate ascent over `config.epochs` passes of the batch.
// A non-finite gradient stops the update before the offending step is
// applied; earlier epochs stay applied.
inline UpdateDiagnostics policy_gradient_update(Mlp& net, Adam& adam, const PolicyHead& head,
                                                const std::vector<Trajectory>& batch,
                                                const TrainerConfig& config) {
  UpdateDiagnostics diag;
  double returns = 0.0;
  for (const auto& traj : batch)
    for (const auto& d : traj) returns += d.reward;
  diag.mean_return = batch.empty() ? 0.0 : returns / static_cast<double>(batch.size());

  const auto samples = make_samples(batch, config.gamma);
  std::vector<double> grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    diag.objective = surrogate(net, head, samples, config.clip, config.entropy_coef, &grad);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      if (std::isfinite(grad[i])) continue;
      std::ostringstream msg;
      msg << "non-finite gradient at parameter " << i << " in epoch " << epoch;
      diag.aborted = true;
      diag.error = msg.str();
      return diag;
    }
    for (auto& g : grad) g = -g;
    adam.learning_rate = config.learning_rate;
    adam.step(net.parameters(), grad);
    ++diag.epochs_run;
  }
  return diag;
}

}  // namespace orl::learn
