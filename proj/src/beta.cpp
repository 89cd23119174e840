#include "riskurn/beta.hpp"

#include <cmath>
#include <stdexcept>

namespace riskurn {

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
// Converges quickly for x < (a+1)/(a+b+2); the caller flips via the
// symmetry I_x(a,b) = 1 - I_(1-x)(b,a) otherwise.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction stalled");
}

}  // namespace

void BetaParams::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(beta)) {
    throw std::invalid_argument("beta shape parameters must be positive");
  }
}

BetaParams limit_distribution(const UrnParameters& params) {
  params.validate();
  return {params.blue_initial / params.increment,
          params.red_initial / params.increment};
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_pdf(const BetaParams& params, double x) {
  params.validate();
  if (!(x > 0.0 && x < 1.0)) {
    throw std::domain_error("beta pdf defined on the open interval (0, 1)");
  }
  const double a = params.alpha;
  const double b = params.beta;
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                  log_beta(a, b));
}

double beta_cdf(const BetaParams& params, double x) {
  params.validate();
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("beta cdf defined on [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double a = params.alpha;
  const double b = params.beta;
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

std::pair<double, double> beta_moments(const BetaParams& params) {
  params.validate();
  const double a = params.alpha;
  const double b = params.beta;
  const double s = a + b;
  return {a / s, a * b / (s * s * (s + 1.0))};
}

}  // namespace riskurn
