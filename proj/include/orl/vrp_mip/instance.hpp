#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "orl/core/errors.hpp"
#include "orl/core/rng.hpp"
#include "orl/vrp/env.hpp"

namespace orl::vrp_mip {

enum class NodeKind { Vehicle, Pickup, Delivery, Transit, Restaurant };

inline char kind_code(NodeKind k) {
  switch (k) {
    case NodeKind::Vehicle: return 'V';
    case NodeKind::Pickup: return 'P';
    case NodeKind::Delivery: return 'D';
    case NodeKind::Transit: return 'T';
    case NodeKind::Restaurant: return 'R';
  }
  return '?';
}

inline constexpr double kNoDeadline = std::numeric_limits<double>::infinity();

struct Node {
  NodeKind kind = NodeKind::Vehicle;
  vrp::Cell cell;
  int supply = 0;                  // q_i
  double deadline = kNoDeadline;   // l_i, finite on delivery and transit nodes
  double revenue = 0.0;            // r_i, on pickup nodes
  int slot = -1;                   // environment order slot, -1 if none
  std::int64_t order_id = -1;
};

// Node layout: 0 = vehicle, 1..n pickups, n+1..2n deliveries (delivery of
// pickup i is i+n), then in-transit deliveries, then restaurants.
struct MipInstance {
  std::vector<Node> nodes;
  int n = 0;
  int n_transit = 0;
  int n_restaurant = 0;
  std::vector<bool> accepted;  // per order i in 0..n-1: already accepted (set A)
  std::vector<std::vector<double>> dist;
  double move_cost = 0.1;      // m
  double time_per_cell = 1.0;  // t
  double service_time = 1.0;   // d
  int capacity = 4;            // U
  double big_m = 0.0;          // M

  int pickup(int i) const { return 1 + i; }
  int delivery(int i) const { return 1 + n + i; }
  int transit(int k) const { return 1 + 2 * n + k; }
  int restaurant(int r) const { return 1 + 2 * n + n_transit + r; }
  int size() const { return static_cast<int>(nodes.size()); }
  int orders() const { return n + n_transit; }

  bool is_restaurant(int node) const { return node >= restaurant(0); }

  // Recomputes the Manhattan matrix and a valid big-M from node cells.
  void finalize() {
    const auto sz = nodes.size();
    dist.assign(sz, std::vector<double>(sz, 0.0));
    double total = 0.0;
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = 0; j < sz; ++j) {
        dist[i][j] = static_cast<double>(vrp::manhattan(nodes[i].cell, nodes[j].cell));
        total += dist[i][j] * time_per_cell;
      }
    big_m = total + static_cast<double>(sz + static_cast<std::size_t>(n)) * service_time + capacity + 1.0;
    if (accepted.size() != static_cast<std::size_t>(n)) accepted.resize(static_cast<std::size_t>(n), false);
  }
};

// Builds the routing model for the given live order slots (all live orders
// when `slots` is empty). Open/accepted orders become pickup-delivery pairs,
// picked-up orders become in-transit delivery nodes.
inline MipInstance build_instance(const vrp::VrpState& state, const vrp::CityConfig& config,
                                  const std::vector<int>& slots = {}) {
  std::vector<int> chosen = slots;
  if (chosen.empty())
    for (std::size_t i = 0; i < state.orders.size(); ++i)
      if (vrp::is_live(state.orders[i].status)) chosen.push_back(static_cast<int>(i));

  std::vector<int> pairs, transit;
  for (int s : chosen) {
    const auto& o = state.orders.at(static_cast<std::size_t>(s));
    if (o.status == vrp::OrderStatus::Open || o.status == vrp::OrderStatus::Accepted) pairs.push_back(s);
    else if (o.status == vrp::OrderStatus::PickedUp) transit.push_back(s);
  }

  MipInstance inst;
  inst.n = static_cast<int>(pairs.size());
  inst.n_transit = static_cast<int>(transit.size());
  inst.n_restaurant = static_cast<int>(state.restaurants.size());
  inst.move_cost = config.move_cost;
  inst.capacity = config.capacity;

  inst.nodes.push_back({NodeKind::Vehicle, state.driver, inst.n_transit, kNoDeadline, 0.0, -1, -1});
  for (int s : pairs) {
    const auto& o = state.orders[static_cast<std::size_t>(s)];
    inst.nodes.push_back({NodeKind::Pickup, o.pickup, 1, kNoDeadline, o.value, s, o.id});
    inst.accepted.push_back(o.status == vrp::OrderStatus::Accepted);
  }
  for (int s : pairs) {
    const auto& o = state.orders[static_cast<std::size_t>(s)];
    inst.nodes.push_back({NodeKind::Delivery, o.delivery, -1,
                          static_cast<double>(config.time_window - o.elapsed), 0.0, s, o.id});
  }
  for (int s : transit) {
    const auto& o = state.orders[static_cast<std::size_t>(s)];
    inst.nodes.push_back({NodeKind::Transit, o.delivery, -1,
                          static_cast<double>(config.time_window - o.elapsed), 0.0, s, o.id});
  }
  for (const auto& r : state.restaurants) inst.nodes.push_back({NodeKind::Restaurant, r, 0, kNoDeadline, 0.0, -1, -1});
  inst.finalize();
  return inst;
}

// Random small instance for solver cross-checks. Deadlines are drawn tight
// enough that some orders cannot be served and capacity is sometimes
// binding.
struct RandomInstanceOptions {
  int width = 5;
  int max_orders = 4;  // bound on n + |T|
  int max_restaurants = 3;
  double max_revenue = 12.0;
  int min_deadline = 2;
  int max_deadline = 24;
};

inline MipInstance random_instance(RngStream& rng, const RandomInstanceOptions& opt = {}) {
  auto cell = [&] {
    return vrp::Cell{static_cast<int>(rng.uniform_int(0, opt.width - 1)), static_cast<int>(rng.uniform_int(0, opt.width - 1))};
  };
  auto deadline = [&] { return static_cast<double>(rng.uniform_int(opt.min_deadline, opt.max_deadline)); };
  MipInstance inst;
  const int total = static_cast<int>(rng.uniform_int(0, opt.max_orders));
  inst.n_transit = static_cast<int>(rng.uniform_int(0, total));
  inst.n = total - inst.n_transit;
  inst.n_restaurant = static_cast<int>(rng.uniform_int(1, opt.max_restaurants));
  inst.capacity = static_cast<int>(rng.uniform_int(std::max(1, inst.n_transit), std::max(4, inst.n_transit)));
  std::vector<vrp::Cell> restaurants;
  for (int r = 0; r < inst.n_restaurant; ++r) restaurants.push_back(cell());

  inst.nodes.push_back({NodeKind::Vehicle, cell(), inst.n_transit, kNoDeadline, 0.0, -1, -1});
  for (int i = 0; i < inst.n; ++i) {
    const auto r = static_cast<std::size_t>(rng.uniform_int(0, inst.n_restaurant - 1));
    inst.nodes.push_back({NodeKind::Pickup, restaurants[r], 1, kNoDeadline, rng.uniform(0.0, opt.max_revenue), i, i});
    inst.accepted.push_back(rng.bernoulli(0.3));
  }
  for (int i = 0; i < inst.n; ++i) inst.nodes.push_back({NodeKind::Delivery, cell(), -1, deadline(), 0.0, i, i});
  for (int k = 0; k < inst.n_transit; ++k)
    inst.nodes.push_back({NodeKind::Transit, cell(), -1, deadline(), 0.0, inst.n + k, inst.n + k});
  for (const auto& r : restaurants) inst.nodes.push_back({NodeKind::Restaurant, r, 0, kNoDeadline, 0.0, -1, -1});
  inst.finalize();
  return inst;
}

// Line-oriented dump: one "node" line per node, then "param" lines.
inline void write_instance(std::ostream& out, const MipInstance& inst) {
  out << "# orl mip instance v1\n";
  out.precision(17);
  for (int i = 0; i < inst.size(); ++i) {
    const auto& nd = inst.nodes[static_cast<std::size_t>(i)];
    const bool acc = nd.kind == NodeKind::Pickup && inst.accepted[static_cast<std::size_t>(i - 1)];
    out << "node " << i << ' ' << kind_code(nd.kind) << ' ' << nd.cell.x << ' ' << nd.cell.y << " q=" << nd.supply
        << " l=";
    if (std::isinf(nd.deadline)) out << "inf";
    else out << nd.deadline;
    out << " r=" << nd.revenue << " a=" << (acc ? 1 : 0) << " slot=" << nd.slot << " id=" << nd.order_id << '\n';
  }
  out << "param n " << inst.n << '\n'
      << "param transit " << inst.n_transit << '\n'
      << "param restaurants " << inst.n_restaurant << '\n'
      << "param m " << inst.move_cost << '\n'
      << "param t " << inst.time_per_cell << '\n'
      << "param d " << inst.service_time << '\n'
      << "param U " << inst.capacity << '\n'
      << "param M " << inst.big_m << '\n';
}

inline MipInstance read_instance(std::istream& in) {
  MipInstance inst;
  std::vector<bool> pickup_accepted;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw ConfigError("mip instance line " + std::to_string(line_no) + ": " + why);
  };
  auto field = [&](const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0) fail("expected " + key + "=...");
    return tok.substr(key.size() + 1);
  };
  double big_m = -1.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "node") {
      int idx;
      char kind;
      Node nd;
      std::string q, l, r, a, slot, id;
      if (!(ls >> idx >> kind >> nd.cell.x >> nd.cell.y >> q >> l >> r >> a >> slot >> id)) fail("malformed node");
      if (idx != static_cast<int>(inst.nodes.size())) fail("node indices must be consecutive");
      switch (kind) {
        case 'V': nd.kind = NodeKind::Vehicle; break;
        case 'P': nd.kind = NodeKind::Pickup; break;
        case 'D': nd.kind = NodeKind::Delivery; break;
        case 'T': nd.kind = NodeKind::Transit; break;
        case 'R': nd.kind = NodeKind::Restaurant; break;
        default: fail("unknown node kind");
      }
      nd.supply = std::stoi(field(q, "q"));
      const auto lv = field(l, "l");
      nd.deadline = lv == "inf" ? kNoDeadline : std::stod(lv);
      nd.revenue = std::stod(field(r, "r"));
      nd.slot = std::stoi(field(slot, "slot"));
      nd.order_id = std::stoll(field(id, "id"));
      if (nd.kind == NodeKind::Pickup) pickup_accepted.push_back(field(a, "a") == "1");
      inst.nodes.push_back(nd);
    } else if (head == "param") {
      std::string key;
      double value;
      if (!(ls >> key >> value)) fail("malformed param");
      if (key == "n") inst.n = static_cast<int>(value);
      else if (key == "transit") inst.n_transit = static_cast<int>(value);
      else if (key == "restaurants") inst.n_restaurant = static_cast<int>(value);
      else if (key == "m") inst.move_cost = value;
      else if (key == "t") inst.time_per_cell = value;
      else if (key == "d") inst.service_time = value;
      else if (key == "U") inst.capacity = static_cast<int>(value);
      else if (key == "M") big_m = value;
      else fail("unknown param " + key);
    } else {
      fail("unknown record " + head);
    }
  }
  if (inst.size() != 1 + 2 * inst.n + inst.n_transit + inst.n_restaurant)
    throw ConfigError("mip instance: node count does not match n/transit/restaurants");
  inst.accepted = pickup_accepted;
  inst.finalize();
  if (big_m > 0.0) inst.big_m = big_m;
  return inst;
}

}  // namespace orl::vrp_mip
