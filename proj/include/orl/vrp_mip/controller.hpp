#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "orl/core/env.hpp"
#include "orl/vrp/env.hpp"
#include "orl/vrp_mip/instance.hpp"
#include "orl/vrp_mip/solver.hpp"

namespace orl::vrp_mip {

enum class ResolveTrigger { None, NewOrder, Expiry, PlanExhausted };

// Rolling-horizon policy: keeps an optimal plan for the current orders and
// re-solves when an order arrives, a planned or known order expires, or the
// plan has been carried out. Each step emits pending accepts first, then
// one movement toward the next node on the route.
class MipController {
 public:
  explicit MipController(std::size_t exactness_cap = 6) : cap_(exactness_cap) {}

  int operator()(const vrp::VrpEnv& env, const EnvStep& step) {
    const auto& cfg = env.config();
    const auto& st = env.state();
    last_trigger_ = detect_trigger(st);
    if (last_trigger_ != ResolveTrigger::None) resolve(st, cfg);
    remember(st);

    if (auto a = next_action(st, cfg, step)) return *a;
    if (!plan_.empty() || !accepts_.empty()) {
      // Plan went stale (capacity or status changed underneath it).
      last_trigger_ = ResolveTrigger::PlanExhausted;
      resolve(st, cfg);
      if (auto a = next_action(st, cfg, step)) return *a;
    }
    return vrp::encode(cfg, {vrp::ActionKind::Wait, 0});
  }

  std::size_t solves() const { return solves_; }
  ResolveTrigger last_trigger() const { return last_trigger_; }
  const MipSolution& last_solution() const { return solution_; }

  // Orders entering the model: in-transit first, then accepted by urgency,
  // then open orders by value, up to the exactness cap.
  std::vector<int> select_orders(const vrp::VrpState& st) const {
    std::vector<int> transit, accepted, open;
    for (std::size_t i = 0; i < st.orders.size(); ++i) {
      switch (st.orders[i].status) {
        case vrp::OrderStatus::PickedUp: transit.push_back(static_cast<int>(i)); break;
        case vrp::OrderStatus::Accepted: accepted.push_back(static_cast<int>(i)); break;
        case vrp::OrderStatus::Open: open.push_back(static_cast<int>(i)); break;
        default: break;
      }
    }
    auto& o = st.orders;
    std::stable_sort(accepted.begin(), accepted.end(),
                     [&](int a, int b) { return o[static_cast<std::size_t>(a)].elapsed > o[static_cast<std::size_t>(b)].elapsed; });
    std::stable_sort(open.begin(), open.end(),
                     [&](int a, int b) { return o[static_cast<std::size_t>(a)].value > o[static_cast<std::size_t>(b)].value; });
    std::vector<int> out;
    for (auto* group : {&transit, &accepted, &open})
      for (int s : *group)
        if (out.size() < cap_) out.push_back(s);
    return out;
  }

 private:
  struct Leg {
    NodeKind kind;  // Pickup, Delivery/Transit, or Restaurant
    int slot = -1;
    std::int64_t order_id = -1;
    int restaurant = -1;
  };

  struct Ref {
    int slot;
    std::int64_t id;
  };

  static bool same_order(const vrp::VrpState& st, const Ref& r) {
    return st.orders[static_cast<std::size_t>(r.slot)].id == r.id;
  }

  ResolveTrigger detect_trigger(const vrp::VrpState& st) {
    if (!initialised_) return ResolveTrigger::NewOrder;
    std::set<std::int64_t> live;
    for (const auto& o : st.orders)
      if (vrp::is_live(o.status)) live.insert(o.id);
    for (auto id : live)
      if (!known_.contains(id)) return ResolveTrigger::NewOrder;
    for (const auto& o : st.orders)
      if (o.status == vrp::OrderStatus::Expired && known_.contains(o.id)) return ResolveTrigger::Expiry;
    for (auto id : known_)
      if (!live.contains(id) && !delivered_.contains(id)) {
        // Slot reused before we saw the expiry.
        bool delivered_now = false;
        for (const auto& o : st.orders)
          if (o.id == id && o.status == vrp::OrderStatus::Delivered) delivered_now = true;
        if (!delivered_now) return ResolveTrigger::Expiry;
      }
    if (plan_done(st)) return ResolveTrigger::PlanExhausted;
    return ResolveTrigger::None;
  }

  void remember(const vrp::VrpState& st) {
    initialised_ = true;
    known_.clear();
    for (const auto& o : st.orders) {
      if (vrp::is_live(o.status)) known_.insert(o.id);
      if (o.status == vrp::OrderStatus::Delivered) delivered_.insert(o.id);
    }
  }

  bool plan_done(const vrp::VrpState& st) {
    drop_finished(st);
    return plan_.empty() && accepts_.empty();
  }

  void resolve(const vrp::VrpState& st, const vrp::CityConfig& cfg) {
    plan_.clear();
    accepts_.clear();
    const auto inst = build_instance(st, cfg, select_orders(st));
    solution_ = solve(inst, SolveOptions{cap_});
    ++solves_;
    for (int i = 0; i < inst.n; ++i) {
      const auto& nd = inst.nodes[static_cast<std::size_t>(inst.pickup(i))];
      if (solution_.accept[static_cast<std::size_t>(i)] &&
          st.orders[static_cast<std::size_t>(nd.slot)].status == vrp::OrderStatus::Open)
        accepts_.push_back({nd.slot, nd.order_id});
    }
    for (std::size_t k = 1; k < solution_.route.size(); ++k) {
      const auto& nd = inst.nodes[static_cast<std::size_t>(solution_.route[k])];
      Leg leg{nd.kind, nd.slot, nd.order_id, -1};
      if (nd.kind == NodeKind::Restaurant) leg.restaurant = solution_.route[k] - inst.restaurant(0);
      plan_.push_back(leg);
    }
    // A plan that only returns to a restaurant we already stand on is empty.
    if (plan_.size() == 1 && plan_.front().kind == NodeKind::Restaurant &&
        st.restaurants[static_cast<std::size_t>(plan_.front().restaurant)] == st.driver)
      plan_.clear();
  }

  void drop_finished(const vrp::VrpState& st) {
    while (!accepts_.empty()) {
      const auto& r = accepts_.front();
      if (same_order(st, r) && st.orders[static_cast<std::size_t>(r.slot)].status == vrp::OrderStatus::Open) break;
      accepts_.erase(accepts_.begin());
    }
    while (!plan_.empty()) {
      const Leg& leg = plan_.front();
      bool done = false;
      if (leg.kind == NodeKind::Restaurant) {
        done = st.restaurants[static_cast<std::size_t>(leg.restaurant)] == st.driver;
      } else {
        const auto& o = st.orders[static_cast<std::size_t>(leg.slot)];
        const bool mine = o.id == leg.order_id;
        if (leg.kind == NodeKind::Pickup)
          done = !mine || o.status == vrp::OrderStatus::PickedUp || !vrp::is_live(o.status);
        else
          done = !mine || !vrp::is_live(o.status);
      }
      if (!done) break;
      plan_.erase(plan_.begin());
    }
  }

  std::optional<int> next_action(const vrp::VrpState& st, const vrp::CityConfig& cfg, const EnvStep& step) {
    drop_finished(st);
    auto allowed = [&](vrp::VrpAction a) -> std::optional<int> {
      const int idx = vrp::encode(cfg, a);
      if (step.action_mask[static_cast<std::size_t>(idx)]) return idx;
      return std::nullopt;
    };
    if (!accepts_.empty()) {
      auto a = allowed({vrp::ActionKind::Accept, accepts_.front().slot});
      accepts_.erase(accepts_.begin());
      if (a) return a;
    }
    if (plan_.empty()) return std::nullopt;
    const Leg& leg = plan_.front();
    switch (leg.kind) {
      case NodeKind::Pickup: return allowed({vrp::ActionKind::Pickup, leg.slot});
      case NodeKind::Delivery:
      case NodeKind::Transit: return allowed({vrp::ActionKind::Deliver, leg.slot});
      case NodeKind::Restaurant: return allowed({vrp::ActionKind::GoToPickup, leg.restaurant});
      default: return std::nullopt;
    }
  }

  std::size_t cap_;
  bool initialised_ = false;
  std::set<std::int64_t> known_;
  std::set<std::int64_t> delivered_;
  std::vector<Ref> accepts_;
  std::vector<Leg> plan_;
  MipSolution solution_;
  std::size_t solves_ = 0;
  ResolveTrigger last_trigger_ = ResolveTrigger::None;
};

}  // namespace orl::vrp_mip
