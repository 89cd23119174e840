#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskurn/urn.hpp"

namespace riskurn {

// One population subgroup. `bias` is an additive shift applied to the
// high-risk decision probability at every assessment; the recorded score
// dynamics still update from the realized classification.
struct GroupSpec {
  std::string name;
  double fraction = 1.0;  // share of the cohort, in (0, 1]
  double bias = 0.0;      // delta in (-1, 1)
  std::optional<UrnParameters> initial_override;

  bool operator==(const GroupSpec&) const = default;
};

struct CohortConfig {
  std::size_t population = 0;
  std::size_t horizon = 0;
  UrnParameters params;
  std::vector<GroupSpec> groups;
  std::uint64_t master_seed = 0;
  bool record_full_paths = true;

  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;

  bool operator==(const CohortConfig&) const = default;
};

// Deterministic proportional allocation: group g takes the next
// ceil(fraction_g * N) defendants, the last group takes the remainder.
std::vector<std::uint32_t> assign_groups(const CohortConfig& config);

struct CohortResult {
  CohortConfig config;
  // Full per-defendant paths; empty when endpoint-only recording was chosen.
  std::vector<DefendantTrajectory> trajectories;
  // Final score and final classification, always recorded.
  std::vector<double> final_probabilities;
  std::vector<Classification> final_classifications;
  std::vector<std::uint32_t> group_index;

  bool has_full_paths() const noexcept { return !trajectories.empty(); }
  const std::string& group_name(std::size_t defendant) const;
  // 1-based assessment time.
  double probability_at(std::size_t defendant, std::size_t time) const;
  Classification classification_at(std::size_t defendant, std::size_t time) const;
};

// Decision probability with a constant additive shift, clamped to [0, 1].
double apply_bias(double p, double delta);

// Simulates the whole cohort. Bitwise-identical output for any `threads`
// value (0 = hardware concurrency): each defendant owns an independent
// seed stream derived from the master seed.
CohortResult run_cohort(const CohortConfig& config, unsigned threads = 0);

struct GroupDisparityStat {
  std::string group;
  std::size_t count = 0;
  double mean_probability = 0.0;
  double score_fraction = 0.0;     // fraction with p_t >= threshold
  double high_risk_rate = 0.0;     // fraction with X_t = high-risk

  bool operator==(const GroupDisparityStat&) const = default;
};

struct PairDisparity {
  std::string group_a;
  std::string group_b;
  double score_gap = 0.0;     // score_fraction_a - score_fraction_b
  double rate_gap = 0.0;      // high_risk_rate_a - high_risk_rate_b
  double rate_gap_se = 0.0;   // binomial normal approximation

  bool operator==(const PairDisparity&) const = default;
};

struct DisparityRecord {
  std::size_t time = 0;
  double threshold = 0.0;
  std::vector<GroupDisparityStat> groups;
  std::vector<PairDisparity> pairs;

  bool operator==(const DisparityRecord&) const = default;
};

// Group statistics at one assessment time (1-based). Endpoint-only results
// can only be queried at the final time.
DisparityRecord group_disparity(const CohortResult& result, std::size_t time,
                                double threshold);

// group_disparity at every t in 1..T; requires full paths.
std::vector<DisparityRecord> disparity_curve(const CohortResult& result,
                                             double threshold);

}  // namespace riskurn
