#pragma once

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "orl/vrp_mip/instance.hpp"
#include "orl/vrp_mip/solution.hpp"

namespace orl::oracles {

// Brute force over every acceptance subset and every ordering of the
// visited nodes, then the cheapest restaurant to finish at. Distances are
// recomputed from node cells. Uses the same fallback as the solver when no
// ordering meets the forced deadlines.
inline vrp_mip::MipSolution exhaustive_oracle(const vrp_mip::MipInstance& inst) {
  using vrp_mip::NodeKind;
  if (inst.orders() > 4) throw std::length_error("exhaustive_oracle: n + |T| must be <= 4");

  auto cells = [&](int i, int j) {
    const auto& a = inst.nodes[static_cast<std::size_t>(i)].cell;
    const auto& b = inst.nodes[static_cast<std::size_t>(j)].cell;
    return static_cast<double>(std::abs(a.x - b.x) + std::abs(a.y - b.y));
  };
  auto is_forced = [&](int node) {
    const auto& nd = inst.nodes[static_cast<std::size_t>(node)];
    if (nd.kind == NodeKind::Transit) return true;
    return nd.kind == NodeKind::Delivery && inst.accepted[static_cast<std::size_t>(node - 1 - inst.n)];
  };

  for (bool relaxed : {false, true}) {
    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> best_route;
    std::vector<bool> best_accept;

    for (unsigned subset = 0; subset < (1u << inst.n); ++subset) {
      std::vector<bool> accept(static_cast<std::size_t>(inst.n));
      bool valid = true;
      int newly = 0;
      double revenue = 0.0;
      std::vector<int> visit;
      for (int i = 0; i < inst.n; ++i) {
        accept[static_cast<std::size_t>(i)] = subset >> i & 1u;
        if (inst.accepted[static_cast<std::size_t>(i)] && !accept[static_cast<std::size_t>(i)]) valid = false;
        if (!accept[static_cast<std::size_t>(i)]) continue;
        revenue += inst.nodes[static_cast<std::size_t>(1 + i)].revenue;
        if (!inst.accepted[static_cast<std::size_t>(i)]) ++newly;
        visit.push_back(1 + i);
        visit.push_back(1 + inst.n + i);
      }
      if (!valid) continue;
      for (int k = 0; k < inst.n_transit; ++k) visit.push_back(1 + 2 * inst.n + k);
      std::sort(visit.begin(), visit.end());

      do {
        int cur = 0;
        int load = inst.n_transit;
        double time = inst.service_time * newly;
        double travelled = 0.0;
        bool ok = load <= inst.capacity;
        std::vector<bool> seen(static_cast<std::size_t>(inst.size()), false);
        for (int node : visit) {
          if (!ok) break;
          const auto& nd = inst.nodes[static_cast<std::size_t>(node)];
          if (nd.kind == NodeKind::Delivery && !seen[static_cast<std::size_t>(node - inst.n)]) ok = false;
          load += nd.supply;
          if (load < 0 || load > inst.capacity) ok = false;
          time += inst.service_time + cells(cur, node) * inst.time_per_cell;
          if (time > nd.deadline + 1e-9 && !(relaxed && is_forced(node))) ok = false;
          travelled += cells(cur, node);
          seen[static_cast<std::size_t>(node)] = true;
          cur = node;
        }
        if (!ok) continue;
        for (int r = 0; r < inst.n_restaurant; ++r) {
          const int rn = 1 + 2 * inst.n + inst.n_transit + r;
          const double obj = revenue - inst.move_cost * (travelled + cells(cur, rn));
          if (!found || obj > best) {
            found = true;
            best = obj;
            best_route.assign(1, 0);
            best_route.insert(best_route.end(), visit.begin(), visit.end());
            best_route.push_back(rn);
            best_accept = accept;
          }
        }
      } while (std::next_permutation(visit.begin(), visit.end()));
    }
    if (found) {
      auto sol = vrp_mip::make_solution(inst, best_route, best_accept);
      sol.deadlines_relaxed = relaxed;
      return sol;
    }
  }
  throw std::runtime_error("exhaustive_oracle: instance has no feasible route");
}

}  // namespace orl::oracles
