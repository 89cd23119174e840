#include "riskurn/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "riskurn/rng.hpp"

namespace riskurn {

namespace {

std::size_t bin_of(double score, std::size_t bins) {
  const auto raw = static_cast<std::size_t>(score * static_cast<double>(bins));
  return std::min(raw, bins - 1);
}

// Per-bin accumulation for one stratum (whole cohort or one group).
struct BinAccumulator {
  std::vector<std::size_t> count;
  std::vector<double> score_sum;
  std::vector<std::size_t> positives;

  explicit BinAccumulator(std::size_t bins)
      : count(bins, 0), score_sum(bins, 0.0), positives(bins, 0) {}

  void add(double score, bool outcome, std::size_t bins) {
    const std::size_t b = bin_of(score, bins);
    count[b] += 1;
    score_sum[b] += score;
    if (outcome) positives[b] += 1;
  }

  std::vector<BinStats> finish(std::size_t bins) const {
    std::vector<BinStats> out;
    out.reserve(bins);
    const double width = 1.0 / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      BinStats stats;
      stats.lower = width * static_cast<double>(b);
      stats.upper = b + 1 == bins ? 1.0 : width * static_cast<double>(b + 1);
      stats.count = count[b];
      if (count[b] > 0) {
        const double nd = static_cast<double>(count[b]);
        stats.mean_score = score_sum[b] / nd;
        stats.observed_rate = static_cast<double>(positives[b]) / nd;
      }
      out.push_back(stats);
    }
    return out;
  }
};

std::optional<double> try_auc(std::span<const double> scores,
                              std::span<const int> outcomes) {
  const bool has_pos = std::find(outcomes.begin(), outcomes.end(), 1) != outcomes.end();
  const bool has_neg = std::find(outcomes.begin(), outcomes.end(), 0) != outcomes.end();
  if (!has_pos || !has_neg) return std::nullopt;
  return auc(scores, outcomes);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Two-proportion z-test (pooled variance); returns the two-sided p-value,
// or 1 when the pooled rate is degenerate.
double two_proportion_p_value(std::size_t hits_a, std::size_t n_a,
                              std::size_t hits_b, std::size_t n_b) {
  const double pa = static_cast<double>(hits_a) / static_cast<double>(n_a);
  const double pb = static_cast<double>(hits_b) / static_cast<double>(n_b);
  const double pooled = static_cast<double>(hits_a + hits_b) /
                        static_cast<double>(n_a + n_b);
  const double var = pooled * (1.0 - pooled) *
                     (1.0 / static_cast<double>(n_a) + 1.0 / static_cast<double>(n_b));
  if (var <= 0.0) return 1.0;
  const double z = (pa - pb) / std::sqrt(var);
  return 2.0 * normal_cdf(-std::fabs(z));
}

double max_abs_rate_gap(const DisparityRecord& record) {
  double gap = 0.0;
  for (const PairDisparity& pair : record.pairs) {
    gap = std::max(gap, std::fabs(pair.rate_gap));
  }
  return gap;
}

double safe_ratio(double numerator, double denominator) {
  if (denominator == 0.0) {
    return numerator == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return numerator / denominator;
}

}  // namespace

void SnapshotSpec::validate(std::size_t cohort_horizon) const {
  if (time < 1) {
    throw std::invalid_argument("snapshot time must be at least 1");
  }
  if (lookahead < 1) {
    throw std::invalid_argument("snapshot lookahead must be at least 1");
  }
  if (time + lookahead > cohort_horizon) {
    throw std::invalid_argument("lookahead exceeds horizon");
  }
  if (bins < 2) {
    throw std::invalid_argument("snapshot needs at least 2 bins");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("threshold must be in (0, 1)");
  }
}

double auc(std::span<const double> scores, std::span<const int> outcomes) {
  if (scores.size() != outcomes.size() || scores.empty()) {
    throw std::invalid_argument("scores and outcomes must have equal nonzero length");
  }
  std::size_t positives = 0;
  for (const int y : outcomes) {
    if (y != 0 && y != 1) {
      throw std::invalid_argument("outcomes must be binary");
    }
    positives += static_cast<std::size_t>(y);
  }
  const std::size_t negatives = outcomes.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("AUC undefined");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midranks make tie handling exact: each tied score contributes 1/2.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (outcomes[order[t]] == 1) positive_rank_sum += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

ValidationReport snapshot_validation(const CohortResult& result,
                                     const SnapshotSpec& spec) {
  if (!result.has_full_paths()) {
    throw std::invalid_argument("full paths required");
  }
  spec.validate(result.config.horizon);

  const std::size_t n = result.config.population;
  const std::size_t n_groups = result.config.groups.size();

  std::vector<double> scores(n);
  std::vector<int> outcomes(n);
  for (std::size_t d = 0; d < n; ++d) {
    scores[d] = result.probability_at(d, spec.time);
    int outcome = 0;
    for (std::size_t t = spec.time + 1; t <= spec.time + spec.lookahead; ++t) {
      if (is_high_risk(result.classification_at(d, t))) {
        outcome = 1;
        break;
      }
    }
    outcomes[d] = outcome;
  }

  ValidationReport report;
  report.spec = spec;
  report.sample_size = n;

  BinAccumulator overall(spec.bins);
  std::vector<BinAccumulator> by_group(n_groups, BinAccumulator(spec.bins));
  std::vector<std::vector<double>> group_scores(n_groups);
  std::vector<std::vector<int>> group_outcomes(n_groups);
  std::vector<std::size_t> group_above(n_groups, 0);
  std::vector<std::size_t> group_high(n_groups, 0);
  std::vector<std::size_t> group_pos(n_groups, 0);

  for (std::size_t d = 0; d < n; ++d) {
    const std::uint32_t g = result.group_index[d];
    const bool outcome = outcomes[d] == 1;
    overall.add(scores[d], outcome, spec.bins);
    by_group[g].add(scores[d], outcome, spec.bins);
    group_scores[g].push_back(scores[d]);
    group_outcomes[g].push_back(outcomes[d]);
    if (scores[d] >= spec.threshold) group_above[g] += 1;
    if (is_high_risk(result.classification_at(d, spec.time))) group_high[g] += 1;
    if (outcome) group_pos[g] += 1;
  }

  report.per_bin = overall.finish(spec.bins);
  report.auc = try_auc(scores, outcomes);
  for (const BinStats& bin : report.per_bin) {
    if (bin.count > 0) {
      report.calibration_gap = std::max(
          report.calibration_gap, std::fabs(*bin.mean_score - *bin.observed_rate));
    }
  }

  report.per_group.reserve(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    GroupValidation gv;
    gv.group = result.config.groups[g].name;
    gv.count = group_scores[g].size();
    gv.per_bin = by_group[g].finish(spec.bins);
    if (gv.count > 0) {
      const double nd = static_cast<double>(gv.count);
      gv.auc = try_auc(group_scores[g], group_outcomes[g]);
      gv.scored_above_threshold = static_cast<double>(group_above[g]) / nd;
      gv.high_risk_rate = static_cast<double>(group_high[g]) / nd;
      gv.outcome_rate = static_cast<double>(group_pos[g]) / nd;
    }
    report.per_group.push_back(std::move(gv));
  }

  for (std::size_t a = 0; a < n_groups; ++a) {
    for (std::size_t b = a + 1; b < n_groups; ++b) {
      const GroupValidation& ga = report.per_group[a];
      const GroupValidation& gb = report.per_group[b];
      if (ga.count == 0 || gb.count == 0) continue;
      report.statistical_parity_gap =
          std::max(report.statistical_parity_gap,
                   std::fabs(ga.scored_above_threshold - gb.scored_above_threshold));
      report.classification_rate_gap =
          std::max(report.classification_rate_gap,
                   std::fabs(ga.high_risk_rate - gb.high_risk_rate));
      for (std::size_t bin = 0; bin < spec.bins; ++bin) {
        const BinStats& ba = ga.per_bin[bin];
        const BinStats& bb = gb.per_bin[bin];
        if (ba.count > 0 && bb.count > 0) {
          report.predictive_parity_gap =
              std::max(report.predictive_parity_gap,
                       std::fabs(*ba.observed_rate - *bb.observed_rate));
        }
      }
    }
  }
  return report;
}

double one_shot_power(const CohortConfig& config, const SnapshotSpec& spec,
                      std::size_t repetitions, double alpha, unsigned threads) {
  config.validate();
  spec.validate(config.horizon);
  if (config.groups.size() != 2) {
    throw std::invalid_argument("power analysis requires exactly two groups");
  }
  if (repetitions < 20) {
    throw std::invalid_argument("power estimate unreliable");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must be in (0, 1)");
  }

  // The classification prefix through spec.time does not depend on later
  // steps, so each replication only simulates up to the snapshot.
  CohortConfig replication = config;
  replication.horizon = spec.time;
  replication.record_full_paths = false;

  std::size_t rejections = 0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    replication.master_seed =
        stream_seed(config.master_seed, seed_domain::repetition, r);
    const CohortResult result = run_cohort(replication, threads);

    std::size_t hits[2] = {0, 0};
    std::size_t totals[2] = {0, 0};
    for (std::size_t d = 0; d < result.config.population; ++d) {
      const std::uint32_t g = result.group_index[d];
      totals[g] += 1;
      if (is_high_risk(result.final_classifications[d])) hits[g] += 1;
    }
    if (totals[0] == 0 || totals[1] == 0) {
      throw std::invalid_argument("group fractions leave a group empty");
    }
    if (two_proportion_p_value(hits[0], totals[0], hits[1], totals[1]) < alpha) {
      rejections += 1;
    }
  }
  return static_cast<double>(rejections) / static_cast<double>(repetitions);
}

AmplificationReport amplification_report(const CohortResult& result,
                                         const SnapshotSpec& spec,
                                         const AmplificationOptions& options) {
  if (!result.has_full_paths()) {
    throw std::invalid_argument("full paths required");
  }
  if (result.config.groups.size() < 2) {
    throw std::invalid_argument("amplification requires at least two groups");
  }
  spec.validate(result.config.horizon);
  if (options.bootstrap_resamples < 2) {
    throw std::invalid_argument("bootstrap needs at least 2 resamples");
  }
  if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) {
    throw std::invalid_argument("ci level must be in (0, 1)");
  }

  AmplificationReport report;
  report.snapshot = snapshot_validation(result, spec);
  report.curve = disparity_curve(result, spec.threshold);
  report.snapshot_gap = max_abs_rate_gap(report.curve[spec.time - 1]);
  report.final_gap = max_abs_rate_gap(report.curve.back());
  report.ratio = safe_ratio(report.final_gap, report.snapshot_gap);
  report.bootstrap_resamples = options.bootstrap_resamples;
  report.ci_level = options.ci_level;

  const std::size_t t_snap = spec.time;
  const std::size_t t_final = result.config.horizon;
  const std::size_t n_groups = result.config.groups.size();

  // Defendant outcomes at the two comparison times, grouped.
  std::vector<std::vector<std::uint8_t>> snap_hits(n_groups);
  std::vector<std::vector<std::uint8_t>> final_hits(n_groups);
  for (std::size_t d = 0; d < result.config.population; ++d) {
    const std::uint32_t g = result.group_index[d];
    snap_hits[g].push_back(is_high_risk(result.classification_at(d, t_snap)));
    final_hits[g].push_back(is_high_risk(result.classification_at(d, t_final)));
  }

  const std::uint64_t seed = options.seed.value_or(result.config.master_seed);
  std::vector<double> ratios;
  ratios.reserve(options.bootstrap_resamples);
  std::vector<double> snap_rate(n_groups), final_rate(n_groups);
  for (std::size_t b = 0; b < options.bootstrap_resamples; ++b) {
    std::mt19937_64 rng(stream_seed(seed, seed_domain::bootstrap, b));
    for (std::size_t g = 0; g < n_groups; ++g) {
      const std::size_t m = snap_hits[g].size();
      if (m == 0) {
        snap_rate[g] = 0.0;
        final_rate[g] = 0.0;
        continue;
      }
      std::size_t s = 0, f = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t pick = bounded(rng, m);
        s += snap_hits[g][pick];
        f += final_hits[g][pick];
      }
      snap_rate[g] = static_cast<double>(s) / static_cast<double>(m);
      final_rate[g] = static_cast<double>(f) / static_cast<double>(m);
    }
    double gap_snap = 0.0, gap_final = 0.0;
    for (std::size_t a = 0; a < n_groups; ++a) {
      for (std::size_t c = a + 1; c < n_groups; ++c) {
        if (snap_hits[a].empty() || snap_hits[c].empty()) continue;
        gap_snap = std::max(gap_snap, std::fabs(snap_rate[a] - snap_rate[c]));
        gap_final = std::max(gap_final, std::fabs(final_rate[a] - final_rate[c]));
      }
    }
    ratios.push_back(safe_ratio(gap_final, gap_snap));
  }
  std::sort(ratios.begin(), ratios.end());

  const auto percentile = [&](double q) {
    const auto idx = static_cast<std::size_t>(
        std::llround(q * static_cast<double>(ratios.size() - 1)));
    return ratios[idx];
  };
  report.ci_low = percentile((1.0 - options.ci_level) / 2.0);
  report.ci_high = percentile((1.0 + options.ci_level) / 2.0);
  return report;
}

}  // namespace riskurn
