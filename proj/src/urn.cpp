#include "riskurn/urn.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "riskurn/rng.hpp"

namespace riskurn {

void UrnParameters::validate() const {
  if (!(blue_initial > 0.0) || !(red_initial > 0.0) ||
      !std::isfinite(blue_initial) || !std::isfinite(red_initial)) {
    throw std::invalid_argument("invalid urn composition");
  }
  if (!(increment > 0.0) || !std::isfinite(increment)) {
    throw std::invalid_argument("invalid urn increment");
  }
}

double initial_probability(const UrnParameters& params) {
  params.validate();
  return params.blue_initial / params.initial_total();
}

double gamma_weight(std::uint64_t i, const UrnParameters& params) {
  params.validate();
  if (i < 2) {
    throw std::invalid_argument("weight undefined before second decision");
  }
  // n_(i-2) = n0 + (i-2) k: the urn total before the decision that the
  // update folds in.
  const double n = params.initial_total() +
                   static_cast<double>(i - 2) * params.increment;
  return n / (n + params.increment);
}

double classic_gamma_weight(std::uint64_t i) {
  if (i < 1) {
    throw std::invalid_argument("weight undefined before first decision");
  }
  return static_cast<double>(i) / static_cast<double>(i + 1);
}

double update_probability(double p_prev, Classification x_prev, std::uint64_t i,
                          const UrnParameters& params) {
  if (!(p_prev >= 0.0 && p_prev <= 1.0)) {
    throw std::invalid_argument("probability outside [0, 1]");
  }
  const double gamma = gamma_weight(i, params);
  return gamma * p_prev + (1.0 - gamma) * classification_value(x_prev);
}

std::pair<UrnState, Classification> step(const UrnState& state,
                                         const UrnParameters& params,
                                         double draw) {
  // Strict inequality: draw < p picks blue. Documented tie-break so results
  // are bit-reproducible.
  const bool blue_drawn = draw < state.blue / state.total();
  UrnState next = state;
  if (blue_drawn) {
    next.blue += params.increment;
  } else {
    next.red += params.increment;
  }
  next.step += 1;
  return {next, blue_drawn ? Classification::high_risk
                           : Classification::low_risk};
}

DefendantTrajectory simulate_path(const UrnParameters& params,
                                  std::size_t horizon, std::uint64_t seed) {
  params.validate();
  if (horizon == 0) {
    throw std::invalid_argument("empty horizon");
  }

  DefendantTrajectory traj;
  traj.params = params;
  traj.seed = seed;
  traj.probabilities.reserve(horizon);
  traj.classifications.reserve(horizon);

  std::mt19937_64 rng(seed);
  double p = initial_probability(params);
  for (std::size_t i = 1; i <= horizon; ++i) {
    traj.probabilities.push_back(p);
    const Classification x = uniform01(rng) < p ? Classification::high_risk
                                                : Classification::low_risk;
    traj.classifications.push_back(x);
    if (i < horizon) {
      p = update_probability(p, x, i + 1, params);
    }
  }
  return traj;
}

double counts_to_probability(const UrnState& state) {
  if (!(state.blue > 0.0) || !(state.red > 0.0)) {
    throw std::invalid_argument("invalid urn composition");
  }
  return state.blue / state.total();
}

}  // namespace riskurn
