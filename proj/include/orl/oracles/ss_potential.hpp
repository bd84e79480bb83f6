#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "orl/binpack/env.hpp"

namespace orl::oracles {

// Sum over open levels of N_h^2 after placing the current item at `level`,
// computed by copying the counts and applying the move.
inline std::int64_t potential_after(const binpack::BinPackState& s, int level) {
  std::vector<std::int64_t> n(static_cast<std::size_t>(s.bin_size) + 1, 0);
  for (int h = 1; h < s.bin_size; ++h) n[static_cast<std::size_t>(h)] = s.count(h);
  if (level > 0) n[static_cast<std::size_t>(level)] -= 1;
  n[static_cast<std::size_t>(level + s.current_item)] += 1;
  std::int64_t total = 0;
  for (int h = 1; h < s.bin_size; ++h) total += n[static_cast<std::size_t>(h)] * n[static_cast<std::size_t>(h)];
  return total;
}

// Feasible levels minimising the post-placement potential.
inline std::vector<int> potential_argmin(const binpack::BinPackState& s) {
  std::vector<int> best;
  std::int64_t best_value = std::numeric_limits<std::int64_t>::max();
  for (int h = 0; h < s.bin_size; ++h) {
    if (!binpack::placement_allowed(s, h)) continue;
    const std::int64_t v = potential_after(s, h);
    if (v < best_value) {
      best_value = v;
      best.clear();
    }
    if (v == best_value) best.push_back(h);
  }
  return best;
}

// Feasible levels minimising the difference form N_{h+s} - N_h
// (N_0 = N_B = 0).
inline std::vector<int> difference_argmin(const binpack::BinPackState& s) {
  std::vector<int> best;
  std::int64_t best_value = std::numeric_limits<std::int64_t>::max();
  for (int h = 0; h < s.bin_size; ++h) {
    if (!binpack::placement_allowed(s, h)) continue;
    const std::int64_t v = s.count(h + s.current_item) - s.count(h);
    if (v < best_value) {
      best_value = v;
      best.clear();
    }
    if (v == best_value) best.push_back(h);
  }
  return best;
}

}  // namespace orl::oracles
