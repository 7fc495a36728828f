#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace cspoly {

/// z for a two-sided 99% interval (0.995 normal quantile).
inline constexpr double kZ99 = 2.5758293035489004;

struct ConfidenceInterval {
  double level = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion. Valid at small counts and
/// at the 0/n boundaries, unlike the normal approximation.
inline ConfidenceInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                                          double z = kZ99, double level = 0.99) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: successes out of range");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  ConfidenceInterval ci;
  ci.level = level;
  ci.lo = std::max(0.0, center - half);
  ci.hi = std::min(1.0, center + half);
  return ci;
}

/// Exact binomial coefficient as a double; intended for small k where the
/// value fits a double exactly.
inline double binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (std::int64_t i = 1; i <= k; ++i)
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

}  // namespace cspoly
