#pragma once

#include <utility>

#include "riskurn/urn.hpp"

namespace riskurn {

// Parameters of the Beta limit law of the long-run score.
struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;

  bool operator==(const BetaParams&) const = default;
};

// Limit law of the score as assessments accumulate: Beta(B0/k, R0/k).
BetaParams limit_distribution(const UrnParameters& params);

// log B(a, b) via log-gamma; stable for large a, b.
double log_beta(double a, double b);

// Density x^(a-1) (1-x)^(b-1) / B(a,b). Defined on the open interval only;
// for a < 1 or b < 1 the density is unbounded at the endpoints.
double beta_pdf(const BetaParams& params, double x);

// Regularized incomplete beta I_x(a, b) on [0, 1], via the continued
// fraction; absolute accuracy well below 1e-10.
double beta_cdf(const BetaParams& params, double x);

// (mean, variance) = (a/(a+b), ab / ((a+b)^2 (a+b+1))).
std::pair<double, double> beta_moments(const BetaParams& params);

}  // namespace riskurn
