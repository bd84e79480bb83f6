#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orl/core/errors.hpp"

namespace orl::binpack {

enum class DistributionClass { BoundedWaste, PerfectlyPackable, LinearWaste, Custom };

inline std::string_view to_string(DistributionClass c) {
  switch (c) {
    case DistributionClass::BoundedWaste: return "BW";
    case DistributionClass::PerfectlyPackable: return "PP";
    case DistributionClass::LinearWaste: return "LW";
    case DistributionClass::Custom: return "custom";
  }
  return "custom";
}

// Item types sorted by strictly increasing size, each with its probability.
struct ItemDistribution {
  std::vector<int> sizes;
  std::vector<double> probs;
  DistributionClass tag = DistributionClass::Custom;

  void validate(int bin_size) const {
    if (sizes.empty()) throw ConfigError("binpack: item distribution has no item types");
    if (sizes.size() != probs.size())
      throw ConfigError("binpack: sizes and probabilities differ in length");
    double total = 0.0;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      if (sizes[j] < 1) throw ConfigError("binpack: item sizes must be positive");
      if (j > 0 && sizes[j] <= sizes[j - 1])
        throw ConfigError("binpack: item sizes must be strictly increasing");
      if (!(probs[j] >= 0.0)) throw ConfigError("binpack: item probabilities must be non-negative");
      total += probs[j];
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("binpack: item probabilities must sum to 1");
    if (sizes.back() >= bin_size)
      throw ConfigError("binpack: largest item size " + std::to_string(sizes.back()) +
                        " must be smaller than bin size " + std::to_string(bin_size));
  }

  int max_size() const { return sizes.back(); }
};

struct BinPackConfig {
  int bin_size = 9;
  ItemDistribution items;
  int horizon = 100;

  void validate() const {
    if (bin_size < 2) throw ConfigError("binpack: bin size must be at least 2");
    if (horizon < 1) throw ConfigError("binpack: horizon must be at least 1");
    items.validate(bin_size);
  }
};

namespace presets {

inline ItemDistribution small_bw() { return {{2, 3}, {0.5, 0.5}, DistributionClass::BoundedWaste}; }
inline ItemDistribution small_pp() { return {{2, 3}, {0.75, 0.25}, DistributionClass::PerfectlyPackable}; }
inline ItemDistribution small_lw() { return {{2, 3}, {0.8, 0.2}, DistributionClass::LinearWaste}; }

inline ItemDistribution large_bw() {
  return {{1, 2, 3, 4, 5, 6, 7, 8, 9},
          {0.14, 0.10, 0.06, 0.13, 0.11, 0.13, 0.03, 0.11, 0.19},
          DistributionClass::BoundedWaste};
}
inline ItemDistribution large_pp() {
  return {{1, 2, 3, 4, 5, 6, 7, 8, 9},
          {0.06, 0.11, 0.11, 0.22, 0.0, 0.11, 0.06, 0.0, 0.33},
          DistributionClass::PerfectlyPackable};
}
inline ItemDistribution large_lw() {
  return {{1, 2, 3, 4, 5, 6, 7, 8, 9},
          {0.0, 0.0, 0.0, 1.0 / 3.0, 0.0, 0.0, 0.0, 0.0, 2.0 / 3.0},
          DistributionClass::LinearWaste};
}

struct Named {
  std::string_view name;
  std::string_view description;
  BinPackConfig config;
};

// bin size 9 runs 100 items, bin size 100 runs 1000 items by default.
inline std::vector<Named> all() {
  return {
      {"bw9", "B=9, sizes {2,3}, p {0.5,0.5}", {9, small_bw(), 100}},
      {"pp9", "B=9, sizes {2,3}, p {0.75,0.25}", {9, small_pp(), 100}},
      {"lw9", "B=9, sizes {2,3}, p {0.8,0.2}", {9, small_lw(), 100}},
      {"bw100", "B=100, sizes 1..9, bounded-waste mix", {100, large_bw(), 1000}},
      {"pp100", "B=100, sizes 1..9, perfectly-packable mix", {100, large_pp(), 1000}},
      {"lw100", "B=100, sizes 1..9, linear-waste mix", {100, large_lw(), 1000}},
      {"toy", "B=9, every item size 3, 30 items", {9, {{3}, {1.0}, DistributionClass::Custom}, 30}},
  };
}

inline std::optional<BinPackConfig> find(std::string_view name) {
  for (auto& p : all())
    if (p.name == name) return p.config;
  return std::nullopt;
}

}  // namespace presets
}  // namespace orl::binpack
