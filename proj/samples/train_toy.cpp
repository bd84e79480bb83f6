// Trains the masked policy on the toy bin packing instance and prints the curve.
#include <cstdio>

#include "orl/binpack/distribution.hpp"
#include "orl/binpack/env.hpp"
#include "orl/learn/trainer.hpp"

int main() {
  using namespace orl;
  const auto toy = *binpack::presets::find("toy");
  learn::TrainerConfig cfg;
  const auto result = learn::train([&] { return binpack::BinPackEnv(toy); }, cfg, {100, {}}, 5, 4, std::nullopt,
                                   [](const learn::Checkpoint&, const learn::CurvePoint& p) {
                                     if (p.iteration % 10 == 0)
                                       std::printf("iter %4d  mean %8.2f  min %8.2f  max %8.2f\n", p.iteration,
                                                   p.mean_reward, p.min_reward, p.max_reward);
                                   });
  std::printf("done after %d iterations\n", result.state.iteration);
}
