// Base-stock policy on the fixed-parameter newsvendor, plus a few order-up-to levels.
#include <cstdio>

#include "orl/core/runner.hpp"
#include "orl/newsvendor/base_stock.hpp"
#include "orl/newsvendor/env.hpp"

int main() {
  using namespace orl;
  newsvendor::NewsvendorConfig cfg;
  cfg.fixed = newsvendor::slice_params();

  const double cr = newsvendor::critical_ratio(50, 25, 0.5, 5);
  std::printf("critical ratio %.6f\n", cr);
  for (int lead : {1, 3, 5, 8})
    std::printf("lead time %d: order up to %lld\n", lead,
                static_cast<long long>(newsvendor::poisson_inv_cdf(lead * 100.0, cr)));

  const auto report = run_benchmark([&] { return newsvendor::NewsvendorEnv(cfg); },
                                    [](RngStream) { return newsvendor::BaseStockPolicy{}; }, 200, 7);
  std::printf("base stock over %zu episodes: mean %.1f std %.1f\n", report.n, report.mean, report.std);
}
