#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "riskurn/beta.hpp"
#include "riskurn/urn.hpp"

namespace riskurn {

struct GoodnessOfFitResult {
  double statistic = 0.0;
  std::size_t sample_size = 0;
  double threshold = 0.0;
  bool passed = false;  // statistic < threshold

  bool operator==(const GoodnessOfFitResult&) const = default;
};

// Two-sided Kolmogorov-Smirnov statistic of a sample against a theoretical
// CDF: sup_i max(i/n - F(x_i), F(x_i) - (i-1)/n) over the order statistics.
// The input need not be pre-sorted. Throws on an empty sample.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

// Asymptotic critical value c(alpha)/sqrt(n); alpha must be 0.05 or 0.01.
double ks_critical_value(double significance, std::size_t n);

// KS test of simulated endpoints against the Beta limit law of `params`.
// Requires at least 100 endpoints for the asymptotic threshold.
GoodnessOfFitResult fit_limit_law(std::span<const double> trajectory_endpoints,
                                  const UrnParameters& params,
                                  double significance);

}  // namespace riskurn
