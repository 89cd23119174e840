#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace riskurn {

// Outcome of one assessment: the subject is classified high-risk (a blue
// draw) or low-risk (a red draw).
enum class Classification : std::uint8_t { low_risk = 0, high_risk = 1 };

constexpr double classification_value(Classification c) noexcept {
  return c == Classification::high_risk ? 1.0 : 0.0;
}

constexpr bool is_high_risk(Classification c) noexcept {
  return c == Classification::high_risk;
}

// Reinforced-urn parameters: initial high-risk mass B0, initial low-risk
// mass R0, and the mass k added to the drawn color after every decision.
// Masses are real-valued; the classic unit urn (1, 1, 1) is a special case.
struct UrnParameters {
  double blue_initial = 1.0;
  double red_initial = 1.0;
  double increment = 1.0;

  // Throws std::invalid_argument when any mass is non-positive or non-finite.
  void validate() const;

  double initial_total() const noexcept { return blue_initial + red_initial; }

  static constexpr UrnParameters classic() noexcept { return {1.0, 1.0, 1.0}; }

  bool operator==(const UrnParameters&) const = default;
};

// Urn composition after `step` completed decisions.
struct UrnState {
  double blue = 0.0;
  double red = 0.0;
  std::uint64_t step = 0;

  double total() const noexcept { return blue + red; }

  static UrnState initial(const UrnParameters& params) {
    return {params.blue_initial, params.red_initial, 0};
  }

  bool operator==(const UrnState&) const = default;
};

// One simulated subject: the score sequence p_1..p_T, with p_i the
// probability of a high-risk classification at assessment i, and the
// realized classifications X_1..X_T.
struct DefendantTrajectory {
  UrnParameters params;
  std::vector<double> probabilities;
  std::vector<Classification> classifications;
  std::uint64_t seed = 0;

  std::size_t horizon() const noexcept { return probabilities.size(); }
  double endpoint() const { return probabilities.back(); }
  Classification final_classification() const { return classifications.back(); }

  bool operator==(const DefendantTrajectory&) const = default;
};

// First-assessment score B0/(B0+R0).
double initial_probability(const UrnParameters& params);

// Weight on the previous score in the update producing p_i, i >= 2:
//   gamma_i = n_(i-2) / (n_(i-2) + k),   n_j = B0 + R0 + j*k.
// Throws for i < 2 ("weight undefined before second decision").
double gamma_weight(std::uint64_t i, const UrnParameters& params);

// The unit-urn special case gamma_i = i/(i+1), defined from the first
// decision on (i >= 1). Only meaningful when B0 = R0 = k.
double classic_gamma_weight(std::uint64_t i);

// Score update: p_i = gamma_i * p_(i-1) + (1 - gamma_i) * X_(i-1).
double update_probability(double p_prev, Classification x_prev, std::uint64_t i,
                          const UrnParameters& params);

// One urn draw driven by a uniform variate in [0, 1): a draw strictly below
// blue/(blue+red) picks blue (high-risk) and returns the reinforced state.
std::pair<UrnState, Classification> step(const UrnState& state,
                                         const UrnParameters& params,
                                         double draw);

// Current high-risk probability read off the ball counts.
double counts_to_probability(const UrnState& state);

// Simulates one subject over `horizon` assessments. Identical
// (params, horizon, seed) yield bitwise-identical trajectories.
DefendantTrajectory simulate_path(const UrnParameters& params,
                                  std::size_t horizon, std::uint64_t seed);

}  // namespace riskurn
