// One VRP episode under the rolling MIP controller, with a per-event tally.
#include <cstdio>
#include <map>

#include "orl/vrp/env.hpp"
#include "orl/vrp_mip/controller.hpp"

int main() {
  using namespace orl;
  vrp::VrpEnv env(*vrp::presets::find("5x5-o5-p2"));
  vrp_mip::MipController controller;
  auto step = env.reset(RngStream(3, 0));
  double total = 0.0;
  std::map<vrp::EventKind, int> events;
  while (!step.done) {
    step = env.step(controller(env, step));
    total += step.reward;
    for (const auto& e : env.last_step().events) ++events[e.kind];
  }
  std::printf("reward %.2f after %d steps, %zu solves\n", total, env.state().t, controller.solves());
  const char* names[] = {"arrived", "accepted", "picked up", "delivered", "failed", "timed out"};
  for (auto [kind, n] : events) std::printf("  %-10s %d\n", names[static_cast<int>(kind)], n);
}
