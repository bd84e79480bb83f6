#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orl/core/errors.hpp"

namespace orl {

struct EpisodeResult {
  double total_reward = 0.0;
  std::size_t steps = 0;
  std::vector<double> per_step_rewards;  // filled only when recording is on
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

// Cross-episode summary. std is the population standard deviation.
struct BenchmarkReport {
  std::string policy;
  std::string env;
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::uint64_t master_seed = 0;
};

inline BenchmarkReport summarize(std::span<const EpisodeResult> results) {
  if (results.empty()) throw std::invalid_argument("summarize: empty result list");
  BenchmarkReport report;
  report.n = results.size();
  report.master_seed = results.front().master_seed;
  double sum = 0.0;
  report.min = results.front().total_reward;
  report.max = results.front().total_reward;
  for (const auto& r : results) {
    sum += r.total_reward;
    report.min = std::min(report.min, r.total_reward);
    report.max = std::max(report.max, r.total_reward);
  }
  const double n = static_cast<double>(results.size());
  report.mean = sum / n;
  double ss = 0.0;
  for (const auto& r : results) {
    const double d = r.total_reward - report.mean;
    ss += d * d;
  }
  report.std = std::sqrt(ss / n);
  // Rounding can push the mean a hair outside [min, max] for constant data.
  report.mean = std::clamp(report.mean, report.min, report.max);
  return report;
}

}  // namespace orl
