#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskurn/cohort.hpp"

namespace riskurn {

// A one-shot validation study: scores taken at assessment `time`, outcomes
// observed over the next `lookahead` assessments, scores grouped into
// `bins` equal-width bands.
struct SnapshotSpec {
  std::size_t time = 1;
  std::size_t lookahead = 1;
  std::size_t bins = 10;
  double threshold = 0.5;

  // Throws when the snapshot does not fit the cohort horizon.
  void validate(std::size_t cohort_horizon) const;

  bool operator==(const SnapshotSpec&) const = default;
};

struct BinStats {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  std::optional<double> mean_score;     // empty bins have no statistics
  std::optional<double> observed_rate;  // fraction with a high-risk outcome

  bool operator==(const BinStats&) const = default;
};

struct GroupValidation {
  std::string group;
  std::size_t count = 0;
  std::optional<double> auc;
  std::vector<BinStats> per_bin;
  double scored_above_threshold = 0.0;  // fraction with p_t >= threshold
  double high_risk_rate = 0.0;          // fraction with X_t = high-risk
  double outcome_rate = 0.0;

  bool operator==(const GroupValidation&) const = default;
};

struct ValidationReport {
  SnapshotSpec spec;
  std::size_t sample_size = 0;
  std::vector<BinStats> per_bin;
  std::optional<double> auc;
  double calibration_gap = 0.0;  // max over occupied bins |mean score - rate|
  std::vector<GroupValidation> per_group;
  double statistical_parity_gap = 0.0;  // max pairwise scored-above gap
  double classification_rate_gap = 0.0; // max pairwise high-risk-rate gap
  double predictive_parity_gap = 0.0;   // max bin-wise between-group rate gap

  bool operator==(const ValidationReport&) const = default;
};

// Mann-Whitney probability of concordance, ties counted 1/2. Requires at
// least one positive and one negative outcome.
double auc(std::span<const double> scores, std::span<const int> outcomes);

// Emulates a snapshot validation study on a simulated cohort: the score of
// defendant d is p_t(d); the outcome is 1 iff any classification in
// (t, t+lookahead] is high-risk. Requires full paths.
ValidationReport snapshot_validation(const CohortResult& result,
                                     const SnapshotSpec& spec);

// Probability that a two-proportion z-test on the groups' high-risk
// classification rates at `spec.time` rejects at level `alpha`, estimated
// over independent cohort replications. Requires exactly two groups and at
// least 20 repetitions.
double one_shot_power(const CohortConfig& config, const SnapshotSpec& spec,
                      std::size_t repetitions, double alpha,
                      unsigned threads = 0);

struct AmplificationOptions {
  std::size_t bootstrap_resamples = 1000;
  double ci_level = 0.99;
  std::optional<std::uint64_t> seed;  // defaults to the cohort master seed
};

struct AmplificationReport {
  ValidationReport snapshot;
  std::vector<DisparityRecord> curve;
  double snapshot_gap = 0.0;  // |classification-rate gap| at spec.time
  double final_gap = 0.0;     // |classification-rate gap| at T
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t bootstrap_resamples = 0;
  double ci_level = 0.0;
};

// Contrasts the snapshot-time disparity with the full-horizon disparity
// and bootstraps a percentile CI for their ratio (resampling defendants
// within groups). Requires full paths and at least two groups.
AmplificationReport amplification_report(const CohortResult& result,
                                         const SnapshotSpec& spec,
                                         const AmplificationOptions& options = {});

}  // namespace riskurn
