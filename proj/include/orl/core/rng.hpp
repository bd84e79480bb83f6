#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "orl/core/errors.hpp"

namespace orl {

// Deterministic random stream keyed by (master_seed, stream_index).
//
// Two streams built from the same key produce the same sequence no matter
// which thread or in which order they are created. fork(tag) derives a
// sibling stream from the key (not from the current position), so an
// environment and the policy acting on it can draw independently.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index, std::uint64_t tag = 0)
      : master_seed_(master_seed), stream_index_(stream_index), tag_(tag) {
    std::seed_seq seq{lo(master_seed), hi(master_seed), lo(stream_index),
                      hi(stream_index), lo(tag),         hi(tag)};
    engine_.seed(seq);
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  std::uint64_t tag() const { return tag_; }

  RngStream fork(std::uint64_t tag) const {
    return RngStream(master_seed_, stream_index_, tag_ * 0x9E3779B97F4A7C15ULL + tag + 1);
  }

  // Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  // Uniform on [a, b); returns a when a == b.
  double uniform(double a, double b) {
    if (!(a < b)) return a;
    return std::uniform_real_distribution<double>(a, b)(engine_);
  }

  // Uniform integer on [a, b].
  std::int64_t uniform_int(std::int64_t a, std::int64_t b) {
    return std::uniform_int_distribution<std::int64_t>(a, b)(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::int64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(engine_);
  }

  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  // Index j drawn with probability probs[j] / sum(probs).
  std::size_t categorical(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    if (!(total > 0.0)) throw ConfigError("categorical: probabilities sum to zero");
    double u = uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      if (probs[j] <= 0.0) continue;
      last_positive = j;
      acc += probs[j];
      if (u < acc) return j;
    }
    return last_positive;
  }

 private:
  static std::uint32_t lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
  static std::uint32_t hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t tag_;
  std::mt19937_64 engine_;
};

}  // namespace orl
