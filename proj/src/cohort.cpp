#include "riskurn/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "riskurn/rng.hpp"

namespace riskurn {

namespace {

// Chunked parallel loop over [0, n). Work items write to disjoint slots, so
// determinism is independent of the thread count.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, const Body& body) {
  unsigned hw = threads == 0 ? std::thread::hardware_concurrency() : threads;
  hw = std::max(1u, std::min<unsigned>(hw, 128));
  if (hw == 1 || n < 2 * hw) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(hw);
  const std::size_t chunk = (n + hw - 1) / hw;
  for (unsigned t = 0; t < hw; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Same loop as urn_core's simulate_path, except the decision draw uses the
// shifted probability. The recorded score still follows the unbiased update
// from the realized classification; delta = 0 reproduces simulate_path
// bitwise.
DefendantTrajectory simulate_biased_path(const UrnParameters& params,
                                         std::size_t horizon,
                                         std::uint64_t seed, double delta) {
  DefendantTrajectory traj;
  traj.params = params;
  traj.seed = seed;
  traj.probabilities.reserve(horizon);
  traj.classifications.reserve(horizon);

  std::mt19937_64 rng(seed);
  double p = initial_probability(params);
  for (std::size_t i = 1; i <= horizon; ++i) {
    traj.probabilities.push_back(p);
    const double decision_p = apply_bias(p, delta);
    const Classification x = uniform01(rng) < decision_p
                                 ? Classification::high_risk
                                 : Classification::low_risk;
    traj.classifications.push_back(x);
    if (i < horizon) {
      p = update_probability(p, x, i + 1, params);
    }
  }
  return traj;
}

double binomial_se(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

void CohortConfig::validate() const {
  if (population < 2) {
    throw std::invalid_argument("cohort population must be at least 2");
  }
  if (horizon < 1) {
    throw std::invalid_argument("cohort horizon must be at least 1");
  }
  params.validate();
  if (groups.empty()) {
    throw std::invalid_argument("cohort requires at least one group");
  }
  double total_fraction = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const GroupSpec& spec = groups[g];
    const std::string where = "group '" + spec.name + "'";
    if (spec.name.empty()) {
      throw std::invalid_argument("group name must not be empty");
    }
    if (spec.name.find_first_of(",\t\r\n") != std::string::npos) {
      throw std::invalid_argument(where +
                                  ": name must not contain delimiters or line breaks");
    }
    if (!(spec.fraction > 0.0 && spec.fraction <= 1.0)) {
      throw std::invalid_argument(where + ": fraction must be in (0, 1]");
    }
    if (!(spec.bias > -1.0 && spec.bias < 1.0)) {
      throw std::invalid_argument(where + ": bias must be in (-1, 1)");
    }
    if (spec.initial_override) {
      spec.initial_override->validate();
    }
    total_fraction += spec.fraction;
  }
  if (std::fabs(total_fraction - 1.0) > 1e-9) {
    throw std::invalid_argument("group fractions must sum to 1");
  }
}

std::vector<std::uint32_t> assign_groups(const CohortConfig& config) {
  const std::size_t n = config.population;
  std::vector<std::uint32_t> assignment(n);
  std::size_t start = 0;
  for (std::size_t g = 0; g < config.groups.size(); ++g) {
    std::size_t take = n - start;
    if (g + 1 < config.groups.size()) {
      const auto want = static_cast<std::size_t>(
          std::ceil(config.groups[g].fraction * static_cast<double>(n) - 1e-9));
      take = std::min(take, want);
    }
    std::fill(assignment.begin() + start, assignment.begin() + start + take,
              static_cast<std::uint32_t>(g));
    start += take;
  }
  return assignment;
}

const std::string& CohortResult::group_name(std::size_t defendant) const {
  return config.groups[group_index[defendant]].name;
}

double CohortResult::probability_at(std::size_t defendant,
                                    std::size_t time) const {
  if (time < 1 || time > config.horizon) {
    throw std::invalid_argument("time out of range");
  }
  if (time == config.horizon) return final_probabilities[defendant];
  if (!has_full_paths()) {
    throw std::invalid_argument("full paths required");
  }
  return trajectories[defendant].probabilities[time - 1];
}

Classification CohortResult::classification_at(std::size_t defendant,
                                               std::size_t time) const {
  if (time < 1 || time > config.horizon) {
    throw std::invalid_argument("time out of range");
  }
  if (time == config.horizon) return final_classifications[defendant];
  if (!has_full_paths()) {
    throw std::invalid_argument("full paths required");
  }
  return trajectories[defendant].classifications[time - 1];
}

double apply_bias(double p, double delta) {
  return std::clamp(p + delta, 0.0, 1.0);
}

CohortResult run_cohort(const CohortConfig& config, unsigned threads) {
  config.validate();
  const std::size_t n = config.population;

  CohortResult result;
  result.config = config;
  result.group_index = assign_groups(config);
  result.final_probabilities.resize(n);
  result.final_classifications.resize(n);
  if (config.record_full_paths) {
    result.trajectories.resize(n);
  }

  parallel_for(n, threads, [&](std::size_t d) {
    const GroupSpec& group = config.groups[result.group_index[d]];
    const UrnParameters& params =
        group.initial_override ? *group.initial_override : config.params;
    const std::uint64_t seed =
        stream_seed(config.master_seed, seed_domain::defendant, d);
    DefendantTrajectory traj =
        simulate_biased_path(params, config.horizon, seed, group.bias);
    result.final_probabilities[d] = traj.probabilities.back();
    result.final_classifications[d] = traj.classifications.back();
    if (config.record_full_paths) {
      result.trajectories[d] = std::move(traj);
    }
  });
  return result;
}

DisparityRecord group_disparity(const CohortResult& result, std::size_t time,
                                double threshold) {
  if (time < 1 || time > result.config.horizon) {
    throw std::invalid_argument("time out of range");
  }
  if (!result.has_full_paths() && time != result.config.horizon) {
    throw std::invalid_argument("full paths required");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("threshold must be in (0, 1)");
  }

  const std::size_t n_groups = result.config.groups.size();
  std::vector<std::size_t> count(n_groups, 0);
  std::vector<double> p_sum(n_groups, 0.0);
  std::vector<std::size_t> above(n_groups, 0);
  std::vector<std::size_t> high(n_groups, 0);

  for (std::size_t d = 0; d < result.config.population; ++d) {
    const std::uint32_t g = result.group_index[d];
    const double p = result.probability_at(d, time);
    count[g] += 1;
    p_sum[g] += p;
    if (p >= threshold) above[g] += 1;
    if (is_high_risk(result.classification_at(d, time))) high[g] += 1;
  }

  DisparityRecord record;
  record.time = time;
  record.threshold = threshold;
  record.groups.reserve(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    GroupDisparityStat stat;
    stat.group = result.config.groups[g].name;
    stat.count = count[g];
    if (count[g] > 0) {
      const double nd = static_cast<double>(count[g]);
      stat.mean_probability = p_sum[g] / nd;
      stat.score_fraction = static_cast<double>(above[g]) / nd;
      stat.high_risk_rate = static_cast<double>(high[g]) / nd;
    }
    record.groups.push_back(std::move(stat));
  }

  for (std::size_t a = 0; a < n_groups; ++a) {
    for (std::size_t b = a + 1; b < n_groups; ++b) {
      if (record.groups[a].count == 0 || record.groups[b].count == 0) continue;
      PairDisparity pair;
      pair.group_a = record.groups[a].group;
      pair.group_b = record.groups[b].group;
      pair.score_gap =
          record.groups[a].score_fraction - record.groups[b].score_fraction;
      pair.rate_gap =
          record.groups[a].high_risk_rate - record.groups[b].high_risk_rate;
      const double se_a =
          binomial_se(record.groups[a].high_risk_rate, record.groups[a].count);
      const double se_b =
          binomial_se(record.groups[b].high_risk_rate, record.groups[b].count);
      pair.rate_gap_se = std::sqrt(se_a * se_a + se_b * se_b);
      record.pairs.push_back(std::move(pair));
    }
  }
  return record;
}

std::vector<DisparityRecord> disparity_curve(const CohortResult& result,
                                             double threshold) {
  if (!result.has_full_paths()) {
    throw std::invalid_argument("full paths required");
  }
  std::vector<DisparityRecord> curve;
  curve.reserve(result.config.horizon);
  for (std::size_t t = 1; t <= result.config.horizon; ++t) {
    curve.push_back(group_disparity(result, t, threshold));
  }
  return curve;
}

}  // namespace riskurn
