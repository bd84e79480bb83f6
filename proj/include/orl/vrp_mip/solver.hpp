#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "orl/vrp_mip/instance.hpp"
#include "orl/vrp_mip/solution.hpp"

namespace orl::vrp_mip {

struct SolveOptions {
  std::size_t exactness_cap = 6;  // max n + |T|
};

class ExactnessCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

// Depth-first branch and bound. Acceptance sets are enumerated outermost
// (they fix the start time B_0 = d |newly accepted|); within a set, routes
// are grown one node at a time. Load and time are propagated along the
// partial route, so the big-M linking constraints become direct checks.
class BranchAndBound {
 public:
  BranchAndBound(const MipInstance& inst, bool relax_forced_deadlines)
      : in_(inst), relax_(relax_forced_deadlines) {
    const auto sz = static_cast<std::size_t>(in_.size());
    to_restaurant_.assign(sz, std::numeric_limits<double>::infinity());
    nearest_restaurant_.assign(sz, -1);
    for (int i = 0; i < in_.size(); ++i)
      for (int r = 0; r < in_.n_restaurant; ++r) {
        const double d = dist(i, in_.restaurant(r));
        if (d < to_restaurant_[static_cast<std::size_t>(i)]) {
          to_restaurant_[static_cast<std::size_t>(i)] = d;
          nearest_restaurant_[static_cast<std::size_t>(i)] = in_.restaurant(r);
        }
      }
  }

  bool run() {
    std::vector<int> optional;
    double forced_revenue = 0.0;
    for (int i = 0; i < in_.n; ++i) {
      if (in_.accepted[static_cast<std::size_t>(i)]) forced_revenue += revenue(i);
      else optional.push_back(i);
    }
    const std::uint32_t subsets = 1u << optional.size();
    std::vector<std::pair<double, std::uint32_t>> order;
    for (std::uint32_t s = 0; s < subsets; ++s) {
      double rev = forced_revenue;
      for (std::size_t b = 0; b < optional.size(); ++b)
        if (s >> b & 1u) rev += revenue(optional[b]);
      order.emplace_back(rev, s);
    }
    // Richest sets first so the incumbent tightens early.
    std::stable_sort(order.begin(), order.end(), [](auto& a, auto& b) { return a.first > b.first; });

    for (auto [rev, s] : order) {
      if (found_ && rev - in_.move_cost * to_restaurant_[0] <= best_ + kEps) continue;
      std::vector<bool> accept(static_cast<std::size_t>(in_.n), false);
      int newly = 0;
      for (int i = 0; i < in_.n; ++i)
        if (in_.accepted[static_cast<std::size_t>(i)]) accept[static_cast<std::size_t>(i)] = true;
      for (std::size_t b = 0; b < optional.size(); ++b)
        if (s >> b & 1u) {
          accept[static_cast<std::size_t>(optional[b])] = true;
          ++newly;
        }
      search_subset(accept, rev, in_.service_time * newly);
    }
    return found_;
  }

  double best() const { return best_; }
  const std::vector<int>& best_route() const { return best_route_; }
  const std::vector<bool>& best_accept() const { return best_accept_; }

 private:
  static constexpr double kEps = 1e-12;

  double dist(int i, int j) const { return in_.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  double revenue(int order) const { return in_.nodes[static_cast<std::size_t>(in_.pickup(order))].revenue; }

  void search_subset(const std::vector<bool>& accept, double revenue_total, double start_time) {
    tasks_.clear();
    pred_.clear();
    for (int i = 0; i < in_.n; ++i) {
      if (!accept[static_cast<std::size_t>(i)]) continue;
      tasks_.push_back(in_.pickup(i));
      pred_.push_back(-1);
      tasks_.push_back(in_.delivery(i));
      pred_.push_back(static_cast<int>(tasks_.size()) - 2);
    }
    for (int k = 0; k < in_.n_transit; ++k) {
      tasks_.push_back(in_.transit(k));
      pred_.push_back(-1);
    }
    enforce_.assign(tasks_.size(), true);
    for (std::size_t b = 0; b < tasks_.size(); ++b) {
      const auto& nd = in_.nodes[static_cast<std::size_t>(tasks_[b])];
      const bool forced = nd.kind == NodeKind::Transit ||
                          (nd.kind == NodeKind::Delivery &&
                           in_.accepted[static_cast<std::size_t>(tasks_[b] - 1 - in_.n)]);
      if (relax_ && forced) enforce_[b] = false;
    }
    full_ = (1ull << tasks_.size()) - 1;
    revenue_ = revenue_total;
    accept_ = accept;
    memo_.clear();
    route_.assign(1, 0);
    dfs(0, 0, 0.0, in_.n_transit, start_time);
  }

  double remaining_lower_bound(int cur, std::uint64_t mask) const {
    double lb = to_restaurant_[static_cast<std::size_t>(cur)];
    for (std::size_t b = 0; b < tasks_.size(); ++b) {
      if (mask >> b & 1ull) continue;
      const int node = tasks_[b];
      lb = std::max(lb, dist(cur, node) + to_restaurant_[static_cast<std::size_t>(node)]);
    }
    return lb;
  }

  void dfs(int cur, std::uint64_t mask, double travelled, int load, double time) {
    if (mask == full_) {
      const double total = travelled + to_restaurant_[static_cast<std::size_t>(cur)];
      const double obj = revenue_ - in_.move_cost * total;
      if (!found_ || obj > best_ + kEps) {
        found_ = true;
        best_ = obj;
        best_route_ = route_;
        best_route_.push_back(nearest_restaurant_[static_cast<std::size_t>(cur)]);
        best_accept_ = accept_;
      }
      return;
    }
    if (found_ && revenue_ - in_.move_cost * (travelled + remaining_lower_bound(cur, mask)) <= best_ + kEps) return;

    // Same visited set and position: time and load are fixed by distance,
    // so a shorter-or-equal earlier arrival dominates.
    const std::uint64_t key = mask << 8 | static_cast<std::uint64_t>(cur);
    auto it = memo_.find(key);
    if (it != memo_.end() && it->second <= travelled) return;
    memo_[key] = travelled;

    for (std::size_t b = 0; b < tasks_.size(); ++b) {
      if (mask >> b & 1ull) continue;
      if (pred_[b] >= 0 && !(mask >> pred_[b] & 1ull)) continue;
      const int node = tasks_[b];
      const auto& nd = in_.nodes[static_cast<std::size_t>(node)];
      const int next_load = load + nd.supply;
      if (next_load < std::max(0, nd.supply) || next_load > std::min(in_.capacity, in_.capacity + nd.supply)) continue;
      const double next_time = time + in_.service_time + dist(cur, node) * in_.time_per_cell;
      if (enforce_[b] && next_time > nd.deadline + 1e-9) continue;
      route_.push_back(node);
      dfs(node, mask | (1ull << b), travelled + dist(cur, node), next_load, next_time);
      route_.pop_back();
    }
  }

  const MipInstance& in_;
  bool relax_;
  std::vector<double> to_restaurant_;
  std::vector<int> nearest_restaurant_;

  std::vector<int> tasks_;
  std::vector<int> pred_;
  std::vector<bool> enforce_;
  std::uint64_t full_ = 0;
  double revenue_ = 0.0;
  std::vector<bool> accept_;
  std::unordered_map<std::uint64_t, double> memo_;
  std::vector<int> route_;

  bool found_ = false;
  double best_ = -std::numeric_limits<double>::infinity();
  std::vector<int> best_route_;
  std::vector<bool> best_accept_;
};

}  // namespace detail

// Exact optimum of the routing model. If the accepted and in-transit
// orders cannot all meet their deadlines, those deadlines are dropped, the
// orders are still routed, and the breaches are listed in the solution.
inline MipSolution solve(const MipInstance& inst, SolveOptions options = {}) {
  if (static_cast<std::size_t>(inst.orders()) > options.exactness_cap)
    throw ExactnessCapExceeded("mip solve: instance has " + std::to_string(inst.orders()) +
                               " orders, above the exactness cap of " + std::to_string(options.exactness_cap) +
                               "; select a sub-instance (MipController does this with its cap)");
  if (inst.n_restaurant < 1) throw std::invalid_argument("mip solve: instance has no restaurant nodes");
  if (inst.size() > 255 || 2 * inst.n + inst.n_transit > 48)
    throw ExactnessCapExceeded("mip solve: instance too large for exact search");

  detail::BranchAndBound strict(inst, false);
  if (strict.run()) return make_solution(inst, strict.best_route(), strict.best_accept());

  detail::BranchAndBound relaxed(inst, true);
  if (!relaxed.run()) throw std::runtime_error("mip solve: no route even with forced deadlines relaxed");
  MipSolution sol = make_solution(inst, relaxed.best_route(), relaxed.best_accept());
  sol.deadlines_relaxed = true;
  return sol;
}

}  // namespace orl::vrp_mip
