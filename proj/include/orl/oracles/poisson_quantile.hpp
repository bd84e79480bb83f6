#pragma once

#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace orl::oracles {

// Smallest z with P(Poisson(mean) <= z) >= q, by direct summation of the
// pmf recurrence p_k = p_{k-1} mean / k in 50-digit arithmetic.
inline std::int64_t poisson_quantile_extended(double mean, double q) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  if (!(mean >= 0.0) || !(q >= 0.0 && q < 1.0)) throw std::domain_error("poisson_quantile_extended: bad argument");
  const Real lambda(mean);
  const Real target(q);
  Real term = exp(-lambda);
  Real cdf = term;
  std::int64_t k = 0;
  while (cdf < target) {
    ++k;
    term *= lambda / Real(k);
    cdf += term;
    if (k > 100000000) throw std::runtime_error("poisson_quantile_extended: no convergence");
  }
  return k;
}

}  // namespace orl::oracles
