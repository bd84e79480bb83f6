#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "orl/core/rng.hpp"

namespace orl::learn {

// Softmax restricted to allowed actions: masked entries are exactly zero
// and the rest renormalised. Falls back to uniform over the allowed set if
// the exponentials underflow or the logits are not finite.
inline std::vector<double> masked_softmax(std::span<const double> logits, const std::vector<bool>& mask) {
  if (logits.size() != mask.size()) throw std::invalid_argument("masked_softmax: logits/mask size mismatch");
  double top = -std::numeric_limits<double>::infinity();
  std::size_t allowed = 0;
  for (std::size_t k = 0; k < logits.size(); ++k)
    if (mask[k]) {
      ++allowed;
      top = std::max(top, logits[k]);
    }
  if (allowed == 0) throw std::invalid_argument("masked_softmax: every action is masked");

  std::vector<double> probs(logits.size(), 0.0);
  double total = 0.0;
  if (std::isfinite(top)) {
    for (std::size_t k = 0; k < logits.size(); ++k)
      if (mask[k]) total += probs[k] = std::exp(logits[k] - top);
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    for (std::size_t k = 0; k < logits.size(); ++k) probs[k] = mask[k] ? 1.0 / static_cast<double>(allowed) : 0.0;
    return probs;
  }
  for (auto& p : probs) p /= total;
  return probs;
}

// Draws an index from probs; zero-probability entries are never returned.
inline int sample_index(const std::vector<double>& probs, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  int last = -1;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last = static_cast<int>(k);
    acc += probs[k];
    if (u < acc) return last;
  }
  if (last < 0) throw std::invalid_argument("sample_index: no positive probability");
  return last;
}

}  // namespace orl::learn
