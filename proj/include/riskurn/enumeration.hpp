#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <vector>

#include "riskurn/urn.hpp"

// Exact-arithmetic mode: rational path enumeration used as the brute-force
// oracle for the floating-point simulator. Everything here is exact; there
// is no rounding to be confounded by.

namespace riskurn {

using rational = boost::multiprecision::cpp_rational;

// Exact rational value of a finite double (sign * mantissa * 2^exp).
rational exact_from_double(double value);

struct ExactPath {
  std::vector<Classification> sequence;
  rational probability;

  std::size_t high_risk_count() const;
};

// All 2^horizon classification sequences with their exact probabilities,
// in lexicographic order (low-risk branch first). Probabilities sum to
// exactly 1. horizon must be in [1, 20].
std::vector<ExactPath> enumerate_exact(const UrnParameters& params,
                                       std::size_t horizon);

// The two algebraic routes to the score sequence p_1..p_T for a fixed
// classification sequence, evaluated in exact rationals:
//  - the weighted-average recursion on scores, and
//  - ball-count bookkeeping followed by the quotient.
// They must agree identically; tests assert exact equality.
std::vector<rational> exact_recursion_probabilities(
    const UrnParameters& params, std::span<const Classification> sequence);
std::vector<rational> exact_count_probabilities(
    const UrnParameters& params, std::span<const Classification> sequence);

}  // namespace riskurn
