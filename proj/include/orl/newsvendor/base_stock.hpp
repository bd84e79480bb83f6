#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "orl/newsvendor/env.hpp"

namespace orl::newsvendor {

// Newsvendor fractile of the backlogging approximation:
// (p - gamma c + k) / (p - gamma c + k + h).
inline double critical_ratio(double price, double cost, double holding, double penalty,
                             double discount = 1.0) {
  const double margin = price - discount * cost + penalty;
  const double denom = margin + holding;
  if (!(denom > 0.0)) throw std::domain_error("critical_ratio: non-positive denominator");
  return margin / denom;
}

// Smallest z with P(Poisson(mean) <= z) >= q.
//
// The pmf is evaluated in log space so that large means (whose e^{-mean}
// underflows) still work; terms are accumulated with compensated summation.
inline std::int64_t poisson_inv_cdf(double mean, double q) {
  if (!(mean >= 0.0)) throw std::domain_error("poisson_inv_cdf: mean must be >= 0");
  if (!(q >= 0.0)) throw std::domain_error("poisson_inv_cdf: quantile must be >= 0");
  if (q >= 1.0) throw std::domain_error("poisson_inv_cdf: quantile 1 has no finite value");
  if (mean == 0.0 || q == 0.0) return 0;

  const double log_mean = std::log(mean);
  double sum = 0.0, comp = 0.0;
  for (std::int64_t k = 0;; ++k) {
    const double kd = static_cast<double>(k);
    const double term = std::exp(kd * log_mean - mean - std::lgamma(kd + 1.0));
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (sum >= q) return k;
    // Past the mode with negligible terms: the remaining mass is below
    // double resolution, so q sits within rounding of 1.
    if (kd > mean && term < 1e-300) return k;
  }
}

inline double critical_ratio(const NewsvendorState& s) {
  const auto& p = s.params;
  return critical_ratio(p.price, p.cost, p.holding, p.penalty, s.discount);
}

// Order-up-to target for lead-time demand ~ Poisson(l * mu).
inline std::int64_t base_stock_level(const NewsvendorState& s) {
  const double lead_mean = static_cast<double>(s.pipeline.size()) * s.params.mean_demand;
  return poisson_inv_cdf(lead_mean, critical_ratio(s));
}

// (z* - sum_i x_i)^+
inline double base_stock_action(const NewsvendorState& s) {
  const std::int64_t gap = base_stock_level(s) - s.inventory_position();
  return static_cast<double>(gap > 0 ? gap : 0);
}

struct BaseStockPolicy {
  double operator()(const NewsvendorEnv& env, const EnvStep&) const {
    return base_stock_action(env.state());
  }
};

}  // namespace orl::newsvendor
