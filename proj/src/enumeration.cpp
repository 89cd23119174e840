#include "riskurn/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace riskurn {

namespace {

using boost::multiprecision::cpp_int;

struct ExactParams {
  rational blue;
  rational red;
  rational increment;
};

ExactParams exact_params(const UrnParameters& params) {
  params.validate();
  return {exact_from_double(params.blue_initial),
          exact_from_double(params.red_initial),
          exact_from_double(params.increment)};
}

}  // namespace

rational exact_from_double(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("cannot represent non-finite value exactly");
  }
  int exp = 0;
  const double mantissa = std::frexp(value, &exp);
  // 53 mantissa bits always fit an int64.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exp -= 53;
  rational r(scaled);
  if (exp >= 0) {
    r *= rational(cpp_int(1) << exp);
  } else {
    r /= rational(cpp_int(1) << -exp);
  }
  return r;
}

std::size_t ExactPath::high_risk_count() const {
  return static_cast<std::size_t>(
      std::count(sequence.begin(), sequence.end(), Classification::high_risk));
}

std::vector<ExactPath> enumerate_exact(const UrnParameters& params,
                                       std::size_t horizon) {
  if (horizon == 0) {
    throw std::invalid_argument("empty horizon");
  }
  if (horizon > 20) {
    throw std::invalid_argument("enumeration infeasible");
  }
  const ExactParams p = exact_params(params);

  std::vector<ExactPath> out;
  out.reserve(std::size_t{1} << horizon);

  std::vector<Classification> sequence;
  sequence.reserve(horizon);

  // Depth-first, low-risk branch first, so the output is lexicographic.
  auto recurse = [&](auto&& self, const rational& blue, const rational& red,
                     const rational& prob) -> void {
    if (sequence.size() == horizon) {
      out.push_back({sequence, prob});
      return;
    }
    const rational total = blue + red;
    sequence.push_back(Classification::low_risk);
    self(self, blue, red + p.increment, prob * (red / total));
    sequence.back() = Classification::high_risk;
    self(self, blue + p.increment, red, prob * (blue / total));
    sequence.pop_back();
  };
  recurse(recurse, p.blue, p.red, rational(1));
  return out;
}

std::vector<rational> exact_recursion_probabilities(
    const UrnParameters& params, std::span<const Classification> sequence) {
  const ExactParams p = exact_params(params);
  const rational n0 = p.blue + p.red;

  std::vector<rational> probs;
  probs.reserve(sequence.size());
  rational prob = p.blue / n0;
  for (std::size_t i = 1; i <= sequence.size(); ++i) {
    probs.push_back(prob);
    if (i < sequence.size()) {
      const rational n = n0 + rational(i - 1) * p.increment;
      const rational gamma = n / (n + p.increment);
      const rational x(is_high_risk(sequence[i - 1]) ? 1 : 0);
      prob = gamma * prob + (1 - gamma) * x;
    }
  }
  return probs;
}

std::vector<rational> exact_count_probabilities(
    const UrnParameters& params, std::span<const Classification> sequence) {
  ExactParams p = exact_params(params);

  std::vector<rational> probs;
  probs.reserve(sequence.size());
  for (const Classification x : sequence) {
    probs.push_back(p.blue / (p.blue + p.red));
    if (is_high_risk(x)) {
      p.blue += p.increment;
    } else {
      p.red += p.increment;
    }
  }
  return probs;
}

}  // namespace riskurn
