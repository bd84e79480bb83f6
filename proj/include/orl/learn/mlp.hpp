#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "orl/core/rng.hpp"

namespace orl::learn {

// Fully connected network, tanh on hidden layers, linear output.
// Parameters are one flat array: per layer the weight matrix (row-major,
// out x in) followed by the bias vector.
class Mlp {
 public:
  Mlp() = default;

  Mlp(std::vector<int> layer_sizes, std::vector<double> params)
      : sizes_(std::move(layer_sizes)), params_(std::move(params)) {
    if (sizes_.size() < 2) throw std::invalid_argument("mlp: need at least input and output sizes");
    for (int s : sizes_)
      if (s < 1) throw std::invalid_argument("mlp: layer sizes must be positive");
    if (params_.size() != count_parameters(sizes_))
      throw std::invalid_argument("mlp: parameter count does not match layer sizes");
  }

  // Gaussian weights with variance gain^2 / fan_in; the output layer is
  // shrunk so initial policies are close to uniform.
  static Mlp random(std::vector<int> layer_sizes, RngStream& rng, double output_gain = 0.01) {
    std::vector<double> params(count_parameters(layer_sizes), 0.0);
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
      const int in = layer_sizes[l], out = layer_sizes[l + 1];
      const bool last = l + 2 == layer_sizes.size();
      const double sd = (last ? output_gain : 1.0) / std::sqrt(static_cast<double>(in));
      for (int k = 0; k < in * out; ++k) params[offset++] = rng.normal(0.0, sd);
      offset += static_cast<std::size_t>(out);
    }
    return Mlp(std::move(layer_sizes), std::move(params));
  }

  static std::size_t count_parameters(const std::vector<int>& sizes) {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
      n += static_cast<std::size_t>(sizes[l]) * static_cast<std::size_t>(sizes[l + 1]) +
           static_cast<std::size_t>(sizes[l + 1]);
    return n;
  }

  const std::vector<int>& layer_sizes() const { return sizes_; }
  std::size_t input_size() const { return static_cast<std::size_t>(sizes_.front()); }
  std::size_t output_size() const { return static_cast<std::size_t>(sizes_.back()); }
  std::size_t parameter_count() const { return params_.size(); }
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  // Layer activations from input to output, kept for backward().
  using Activations = std::vector<std::vector<double>>;

  std::vector<double> forward(std::span<const double> input, Activations* cache = nullptr) const {
    if (input.size() != input_size()) throw std::invalid_argument("mlp: input size mismatch");
    std::vector<double> act(input.begin(), input.end());
    if (cache) {
      cache->clear();
      cache->push_back(act);
    }
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      const auto in = static_cast<std::size_t>(sizes_[l]);
      const auto out = static_cast<std::size_t>(sizes_[l + 1]);
      const bool last = l + 2 == sizes_.size();
      const double* w = params_.data() + offset;
      const double* b = w + in * out;
      std::vector<double> next(out);
      for (std::size_t r = 0; r < out; ++r) {
        double z = b[r];
        for (std::size_t c = 0; c < in; ++c) z += w[r * in + c] * act[c];
        next[r] = last ? z : std::tanh(z);
      }
      offset += in * out + out;
      act = std::move(next);
      if (cache) cache->push_back(act);
    }
    return act;
  }

  // Adds dL/dparams to grad, given the forward cache and dL/doutput.
  void backward(const Activations& cache, std::span<const double> grad_output, std::span<double> grad) const {
    if (grad.size() != params_.size()) throw std::invalid_argument("mlp: gradient buffer size mismatch");
    std::vector<double> delta(grad_output.begin(), grad_output.end());
    std::size_t offset = params_.size();
    for (std::size_t l = sizes_.size() - 1; l >= 1; --l) {
      const auto in = static_cast<std::size_t>(sizes_[l - 1]);
      const auto out = static_cast<std::size_t>(sizes_[l]);
      offset -= in * out + out;
      const bool last = l + 1 == sizes_.size();
      if (!last)
        for (std::size_t r = 0; r < out; ++r) delta[r] *= 1.0 - cache[l][r] * cache[l][r];
      const double* w = params_.data() + offset;
      double* gw = grad.data() + offset;
      double* gb = gw + in * out;
      const auto& prev = cache[l - 1];
      std::vector<double> prev_delta(in, 0.0);
      for (std::size_t r = 0; r < out; ++r) {
        gb[r] += delta[r];
        for (std::size_t c = 0; c < in; ++c) {
          gw[r * in + c] += delta[r] * prev[c];
          prev_delta[c] += w[r * in + c] * delta[r];
        }
      }
      delta = std::move(prev_delta);
    }
  }

 private:
  std::vector<int> sizes_;
  std::vector<double> params_;
};

// Adam on a flat parameter vector.
struct Adam {
  double learning_rate = 3e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step_count = 0;
  std::vector<double> m;
  std::vector<double> v;

  // Descends along grad (pass the negated gradient to ascend).
  void step(std::span<double> params, std::span<const double> grad) {
    if (m.size() != params.size()) {
      m.assign(params.size(), 0.0);
      v.assign(params.size(), 0.0);
    }
    ++step_count;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
      params[i] -= learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + epsilon);
    }
  }
};

}  // namespace orl::learn
