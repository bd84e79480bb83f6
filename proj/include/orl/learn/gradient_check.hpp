#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "orl/core/rng.hpp"

namespace orl::learn {

// loss(params, grad): returns the loss and, when grad is non-null, fills it
// with the analytic gradient.
using LossFunction = std::function<double(std::span<const double>, std::vector<double>*)>;

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
};

// Compares the analytic gradient with central differences on a random
// subset of `subset` coordinates (all of them if subset >= size).
// Relative error is |a - n| / max(|a|, |n|, 1e-6).
inline GradientCheckResult gradient_check(std::vector<double> params, const LossFunction& loss, RngStream& rng,
                                          std::size_t subset = 64, double step = 1e-5) {
  std::vector<double> analytic;
  loss(params, &analytic);
  std::vector<std::size_t> idx(params.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (subset < idx.size()) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(subset);
    std::sort(idx.begin(), idx.end());
  }
  GradientCheckResult result;
  for (std::size_t i : idx) {
    const double saved = params[i];
    params[i] = saved + step;
    const double up = loss(params, nullptr);
    params[i] = saved - step;
    const double down = loss(params, nullptr);
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double err = std::abs(analytic[i] - numeric) / std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    if (result.checked == 0 || err > result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_index = i;
    }
    ++result.checked;
  }
  return result;
}

}  // namespace orl::learn
