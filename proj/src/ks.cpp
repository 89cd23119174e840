#include "riskurn/ks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace riskurn {

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw std::invalid_argument("KS statistic of an empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double upper = static_cast<double>(i + 1) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    d = std::max(d, std::max(upper, lower));
  }
  return d;
}

double ks_critical_value(double significance, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("KS critical value of an empty sample");
  }
  double c = 0.0;
  if (significance == 0.05) {
    c = 1.36;
  } else if (significance == 0.01) {
    c = 1.63;
  } else {
    throw std::invalid_argument("unsupported significance level (use 0.05 or 0.01)");
  }
  return c / std::sqrt(static_cast<double>(n));
}

GoodnessOfFitResult fit_limit_law(std::span<const double> trajectory_endpoints,
                                  const UrnParameters& params,
                                  double significance) {
  if (trajectory_endpoints.size() < 100) {
    throw std::invalid_argument("sample too small for asymptotic KS threshold");
  }
  const BetaParams limit = limit_distribution(params);

  GoodnessOfFitResult result;
  result.sample_size = trajectory_endpoints.size();
  result.threshold = ks_critical_value(significance, result.sample_size);
  result.statistic = ks_statistic(
      trajectory_endpoints, [&](double x) { return beta_cdf(limit, x); });
  result.passed = result.statistic < result.threshold;
  return result;
}

}  // namespace riskurn
