#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "orl/vrp_mip/instance.hpp"

namespace orl::vrp_mip {

// A route through the model plus the implied decision variables.
// x_ij = 1 exactly for consecutive route nodes; unvisited nodes carry the
// smallest admissible load and time zero.
struct MipSolution {
  std::vector<int> route;
  std::vector<bool> accept;  // y_i for pickup orders
  std::vector<double> load;  // Q_i
  std::vector<double> time;  // B_i
  double objective = 0.0;
  bool deadlines_relaxed = false;
  std::vector<int> deadline_violations;  // nodes with B_i > l_i

  bool arc(int i, int j) const {
    for (std::size_t k = 0; k + 1 < route.size(); ++k)
      if (route[k] == i && route[k + 1] == j) return true;
    return false;
  }
};

inline MipSolution make_solution(const MipInstance& inst, std::vector<int> route, std::vector<bool> accept) {
  MipSolution sol;
  sol.route = std::move(route);
  sol.accept = std::move(accept);
  const auto sz = static_cast<std::size_t>(inst.size());
  sol.load.assign(sz, 0.0);
  sol.time.assign(sz, 0.0);
  for (std::size_t i = 0; i < sz; ++i) sol.load[i] = std::max(0, inst.nodes[i].supply);

  int newly_accepted = 0;
  for (int i = 0; i < inst.n; ++i) {
    if (!sol.accept[static_cast<std::size_t>(i)]) continue;
    sol.objective += inst.nodes[static_cast<std::size_t>(inst.pickup(i))].revenue;
    if (!inst.accepted[static_cast<std::size_t>(i)]) ++newly_accepted;
  }
  sol.load[0] = inst.n_transit;
  sol.time[0] = inst.service_time * newly_accepted;
  for (std::size_t k = 1; k < sol.route.size(); ++k) {
    const auto i = static_cast<std::size_t>(sol.route[k - 1]);
    const auto j = static_cast<std::size_t>(sol.route[k]);
    sol.load[j] = sol.load[i] + inst.nodes[j].supply;
    sol.time[j] = sol.time[i] + inst.service_time + inst.dist[i][j] * inst.time_per_cell;
    sol.objective -= inst.move_cost * inst.dist[i][j];
  }
  for (int node : sol.route) {
    const auto& nd = inst.nodes[static_cast<std::size_t>(node)];
    if (sol.time[static_cast<std::size_t>(node)] > nd.deadline + 1e-9) sol.deadline_violations.push_back(node);
  }
  return sol;
}

// Checks every constraint of the three-index model against the solution's
// x (from the route), y, Q and B. Deadline breaches listed in
// deadline_violations are tolerated only when deadlines_relaxed is set and
// the node belongs to a forced (accepted or in-transit) order.
inline std::vector<std::string> verify(const MipInstance& inst, const MipSolution& sol, double tol = 1e-9) {
  std::vector<std::string> problems;
  auto report = [&](const std::string& s) { problems.push_back(s); };
  const int sz = inst.size();
  if (static_cast<int>(sol.load.size()) != sz || static_cast<int>(sol.time.size()) != sz ||
      static_cast<int>(sol.accept.size()) != inst.n) {
    report("solution vectors have the wrong size");
    return problems;
  }
  std::vector<std::vector<int>> x(static_cast<std::size_t>(sz), std::vector<int>(static_cast<std::size_t>(sz), 0));
  for (std::size_t k = 0; k + 1 < sol.route.size(); ++k)
    x[static_cast<std::size_t>(sol.route[k])][static_cast<std::size_t>(sol.route[k + 1])] += 1;
  auto out_deg = [&](int i) {
    int s = 0;
    for (int j = 0; j < sz; ++j) s += x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return s;
  };
  auto in_deg_non_r = [&](int i) {
    int s = 0;
    for (int j = 0; j < sz; ++j)
      if (!inst.is_restaurant(j)) s += x[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return s;
  };
  auto y = [&](int i) { return sol.accept[static_cast<std::size_t>(i)] ? 1 : 0; };
  auto Q = [&](int i) { return sol.load[static_cast<std::size_t>(i)]; };
  auto B = [&](int i) { return sol.time[static_cast<std::size_t>(i)]; };
  auto c = [&](int i, int j) { return inst.dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  auto& nodes = inst.nodes;

  for (int i = 0; i < inst.n; ++i) {
    const int p = inst.pickup(i), d = inst.delivery(i);
    if (out_deg(p) != y(i)) report("pickup " + std::to_string(p) + ": out-degree differs from y");
    if (out_deg(p) - out_deg(d) != 0) report("order " + std::to_string(i) + ": pickup/delivery out-degree mismatch");
    if (inst.accepted[static_cast<std::size_t>(i)] && y(i) != 1)
      report("accepted order " + std::to_string(i) + " not served");
  }
  if (out_deg(0) != 1) report("vehicle node must have exactly one departure");
  for (int k = 0; k < inst.n_transit; ++k)
    if (out_deg(inst.transit(k)) != 1) report("in-transit node " + std::to_string(inst.transit(k)) + " not served once");
  int into_r = 0;
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j)
      if (!inst.is_restaurant(i) && inst.is_restaurant(j)) into_r += x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (into_r != 1) report("route must end with exactly one arc into a restaurant");
  for (int i = 1; i < inst.restaurant(0); ++i)
    if (in_deg_non_r(i) != out_deg(i)) report("flow conservation broken at node " + std::to_string(i));

  for (int i = 0; i < sz; ++i) {
    const int q = nodes[static_cast<std::size_t>(i)].supply;
    if (Q(i) < std::max(0, q) - tol || Q(i) > std::min(inst.capacity, inst.capacity + q) + tol)
      report("load bounds broken at node " + std::to_string(i));
    for (int j = 0; j < sz; ++j) {
      const int xij = x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const int qj = nodes[static_cast<std::size_t>(j)].supply;
      if (Q(i) + qj - inst.big_m * (1 - xij) > Q(j) + tol)
        report("load propagation broken on arc " + std::to_string(i) + "->" + std::to_string(j));
      if (B(i) + inst.service_time + c(i, j) * inst.time_per_cell - inst.big_m * (1 - xij) > B(j) + tol)
        report("time propagation broken on arc " + std::to_string(i) + "->" + std::to_string(j));
    }
  }
  for (int i = 0; i < inst.n; ++i) {
    const int p = inst.pickup(i), d = inst.delivery(i);
    if (B(p) + c(p, d) * inst.time_per_cell - inst.big_m * (1 - y(i)) > B(d) + tol)
      report("pickup " + std::to_string(p) + " does not precede its delivery");
  }
  int newly = 0;
  for (int i = 0; i < inst.n; ++i)
    if (!inst.accepted[static_cast<std::size_t>(i)]) newly += y(i);
  if (std::abs(inst.service_time * newly - B(0)) > tol) report("initial time differs from acceptance service time");

  for (int i = 1; i < inst.restaurant(0); ++i) {
    const auto& nd = nodes[static_cast<std::size_t>(i)];
    if (nd.kind != NodeKind::Delivery && nd.kind != NodeKind::Transit) continue;
    if (B(i) <= nd.deadline + tol) continue;
    const bool forced = nd.kind == NodeKind::Transit || inst.accepted[static_cast<std::size_t>(i - 1 - inst.n)];
    const bool declared = std::find(sol.deadline_violations.begin(), sol.deadline_violations.end(), i) !=
                          sol.deadline_violations.end();
    if (!(sol.deadlines_relaxed && forced && declared))
      report("deadline broken at node " + std::to_string(i));
  }

  double objective = 0.0;
  for (int i = 0; i < inst.n; ++i) objective += nodes[static_cast<std::size_t>(inst.pickup(i))].revenue * y(i);
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j) objective -= inst.move_cost * c(i, j) * x[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (std::abs(objective - sol.objective) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "objective " << sol.objective << " differs from recomputed " << objective;
    report(msg.str());
  }
  return problems;
}

}  // namespace orl::vrp_mip
