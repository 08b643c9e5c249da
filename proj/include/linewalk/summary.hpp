#pragma once

// Order statistics and binomial intervals used by the experiment reports.

#include "linewalk/pl_homeo.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace linewalk {

/// Linear-interpolation quantile (type 7); NaN for an empty sample.
inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(h));
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (h - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

/// Clopper-Pearson interval for a binomial proportion.
inline Interval<double> binomial_interval(std::size_t successes, std::size_t trials, double confidence = 0.95) {
  if (trials == 0) return {0.0, 1.0};
  using boost::math::binomial_distribution;
  const double alpha = 0.5 * (1 - confidence);
  const auto n = static_cast<double>(trials), k = static_cast<double>(successes);
  return {binomial_distribution<>::find_lower_bound_on_p(n, k, alpha),
          binomial_distribution<>::find_upper_bound_on_p(n, k, alpha)};
}

}  // namespace linewalk
