#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gld.hpp"

namespace testutil {

// One-sample Kolmogorov-Smirnov statistic against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

// Asymptotic critical value at the 1% level.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

// CDF of a GLD (total on the reals).
inline double gld_cdf(const gldemu::GldParams& p, double y) {
  const gldemu::SupportBounds b = gldemu::support(p);
  if (y <= b.lower) return 0.0;
  if (y >= b.upper) return 1.0;
  return gldemu::inverse_cdf(p, y);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace testutil
