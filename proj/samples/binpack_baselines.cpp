// Best Fit vs Sum of Squares on every bin packing preset.
#include <cstdio>
#include <string>

#include "orl/binpack/distribution.hpp"
#include "orl/binpack/env.hpp"
#include "orl/binpack/policies.hpp"
#include "orl/core/runner.hpp"

int main() {
  using namespace orl;
  std::printf("%-8s %12s %10s %12s %10s\n", "preset", "BF mean", "BF std", "SS mean", "SS std");
  for (const auto& p : binpack::presets::all()) {
    auto make_env = [&] { return binpack::BinPackEnv(p.config); };
    const auto bf = run_benchmark(make_env, [](RngStream) { return binpack::BestFitPolicy{}; }, 50, 1, {4});
    const auto ss = run_benchmark(make_env, [](RngStream) { return binpack::SumOfSquaresPolicy{}; }, 50, 1, {4});
    std::printf("%-8s %12.2f %10.2f %12.2f %10.2f\n", std::string(p.name).c_str(), bf.mean, bf.std, ss.mean, ss.std);
  }
}
