#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "riskurn/cohort.hpp"
#include "riskurn/ks.hpp"
#include "riskurn/rng.hpp"

using namespace riskurn;

namespace {

CohortConfig two_group_config(std::size_t population, std::size_t horizon,
                              double bias_a, double bias_b,
                              std::uint64_t seed, bool full_paths = true) {
  CohortConfig config;
  config.population = population;
  config.horizon = horizon;
  config.params = UrnParameters::classic();
  config.groups = {{"a", 0.5, bias_a, std::nullopt},
                   {"b", 0.5, bias_b, std::nullopt}};
  config.master_seed = seed;
  config.record_full_paths = full_paths;
  return config;
}

// Two-sample KS distance between sorted copies of the inputs.
double two_sample_ks(std::vector<double> xs, std::vector<double> ys) {
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    if (xs[i] <= ys[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::fabs(static_cast<double>(i) / xs.size() -
                              static_cast<double>(j) / ys.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("apply_bias") {
  CHECK(apply_bias(0.5, 0.01) == doctest::Approx(0.51).epsilon(1e-15));
  CHECK(apply_bias(0.995, 0.01) == 1.0);
  CHECK(apply_bias(0.005, -0.01) == 0.0);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = uniform01(rng);
    CHECK(apply_bias(p, 0.0) == p);
    // monotone in delta
    const double d1 = uniform01(rng) * 0.5;
    const double d2 = d1 + uniform01(rng) * 0.4;
    CHECK(apply_bias(p, d2) >= apply_bias(p, d1));
    CHECK(apply_bias(p, d1) >= 0.0);
    CHECK(apply_bias(p, d2) <= 1.0);
  }
}

TEST_CASE("config validation names the violated invariant") {
  auto config = two_group_config(100, 10, 0.0, 0.0, 1);
  CHECK_NOTHROW(config.validate());

  auto small = config;
  small.population = 1;
  CHECK_THROWS_WITH_AS(small.validate(), "cohort population must be at least 2",
                       std::invalid_argument);

  auto no_horizon = config;
  no_horizon.horizon = 0;
  CHECK_THROWS_AS(no_horizon.validate(), std::invalid_argument);

  auto no_groups = config;
  no_groups.groups.clear();
  CHECK_THROWS_WITH_AS(no_groups.validate(), "cohort requires at least one group",
                       std::invalid_argument);

  auto bad_fraction = config;
  bad_fraction.groups[0].fraction = 0.6;
  CHECK_THROWS_WITH_AS(bad_fraction.validate(), "group fractions must sum to 1",
                       std::invalid_argument);

  auto bad_bias = config;
  bad_bias.groups[1].bias = 1.0;
  CHECK_THROWS_WITH_AS(bad_bias.validate(), "group 'b': bias must be in (-1, 1)",
                       std::invalid_argument);

  auto bad_name = config;
  bad_name.groups[0].name = "a,b";  // would corrupt the tabular outputs
  CHECK_THROWS_AS(bad_name.validate(), std::invalid_argument);

  auto bad_override = config;
  bad_override.groups[0].initial_override = UrnParameters{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(bad_override.validate(), std::invalid_argument);
}

TEST_CASE("group assignment is deterministic and proportional") {
  auto config = two_group_config(30, 5, 0.0, 0.0, 1);
  const auto groups = assign_groups(config);
  CHECK(std::count(groups.begin(), groups.end(), 0u) == 15);
  CHECK(std::count(groups.begin(), groups.end(), 1u) == 15);
  CHECK(groups.front() == 0u);
  CHECK(groups.back() == 1u);

  CohortConfig thirds;
  thirds.population = 10;
  thirds.horizon = 1;
  thirds.groups = {{"x", 1.0 / 3.0, 0.0, std::nullopt},
                   {"y", 1.0 / 3.0, 0.0, std::nullopt},
                   {"z", 1.0 / 3.0, 0.0, std::nullopt}};
  const auto three = assign_groups(thirds);
  CHECK(std::count(three.begin(), three.end(), 0u) == 4);
  CHECK(std::count(three.begin(), three.end(), 1u) == 4);
  CHECK(std::count(three.begin(), three.end(), 2u) == 2);
}

TEST_CASE("run_cohort is deterministic at any thread count") {
  const auto config = two_group_config(400, 30, 0.02, 0.0, 77);
  const auto serial = run_cohort(config, 1);
  const auto parallel = run_cohort(config, 4);
  const auto wide = run_cohort(config, 13);

  CHECK(serial.final_probabilities == parallel.final_probabilities);
  CHECK(serial.final_classifications == parallel.final_classifications);
  CHECK(serial.trajectories == parallel.trajectories);
  CHECK(serial.trajectories == wide.trajectories);
  CHECK(serial.group_index == parallel.group_index);
}

TEST_CASE("unbiased cohort reproduces plain path simulation bitwise") {
  CohortConfig config;
  config.population = 50;
  config.horizon = 40;
  config.params = {2.0, 1.0, 0.5};
  config.groups = {{"all", 1.0, 0.0, std::nullopt}};
  config.master_seed = 99;
  const auto result = run_cohort(config, 2);

  for (std::size_t d = 0; d < config.population; ++d) {
    const auto direct = simulate_path(
        config.params, config.horizon,
        stream_seed(config.master_seed, seed_domain::defendant, d));
    CHECK(result.trajectories[d] == direct);
  }
}

TEST_CASE("group initial_override is honored") {
  CohortConfig config = two_group_config(60, 12, 0.0, 0.0, 5);
  config.groups[1].initial_override = UrnParameters{3.0, 1.0, 1.0};
  const auto result = run_cohort(config);
  for (std::size_t d = 0; d < config.population; ++d) {
    const double p1 = result.trajectories[d].probabilities.front();
    if (result.group_index[d] == 0) {
      CHECK(p1 == doctest::Approx(0.5).epsilon(1e-15));
    } else {
      CHECK(p1 == doctest::Approx(0.75).epsilon(1e-15));
    }
  }
}

TEST_CASE("endpoint-only mode keeps finals and drops paths") {
  const auto config = two_group_config(100, 20, 0.0, 0.0, 3, false);
  const auto full = run_cohort(two_group_config(100, 20, 0.0, 0.0, 3, true));
  const auto light = run_cohort(config);

  CHECK_FALSE(light.has_full_paths());
  CHECK(light.final_probabilities == full.final_probabilities);
  CHECK(light.final_classifications == full.final_classifications);
  CHECK_THROWS_WITH_AS(light.probability_at(0, 5), "full paths required",
                       std::invalid_argument);
  CHECK(light.probability_at(0, 20) == full.probability_at(0, 20));
}

TEST_CASE("identical unbiased groups are statistically indistinguishable") {
  const auto result = run_cohort(two_group_config(4000, 60, 0.0, 0.0, 21));
  std::vector<double> a, b;
  for (std::size_t d = 0; d < result.config.population; ++d) {
    (result.group_index[d] == 0 ? a : b).push_back(result.final_probabilities[d]);
  }
  const double d = two_sample_ks(std::move(a), std::move(b));
  // 1% two-sample critical value: 1.63 * sqrt((n+m)/(n m))
  const double critical = 1.63 * std::sqrt(4000.0 / (2000.0 * 2000.0));
  CHECK(d < critical);
}

TEST_CASE("low-reinforcement cohorts cluster, high-reinforcement extremize") {
  // 30 defendants over 15 assessments, k = 0.1: every reachable endpoint
  // lies inside (0.2, 0.8) because the urn total is already 3.5 at T = 15.
  CohortConfig mild;
  mild.population = 30;
  mild.horizon = 15;
  mild.params = {1.0, 1.0, 0.1};
  mild.groups = {{"all", 1.0, 0.0, std::nullopt}};
  mild.master_seed = 11;
  const auto mild_result = run_cohort(mild);
  for (const double p : mild_result.final_probabilities) {
    CHECK(p > 0.2);
    CHECK(p < 0.8);
  }

  CohortConfig harsh = mild;
  harsh.params = {1.0, 1.0, 10.0};
  int outside = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    harsh.master_seed = seed;
    const auto result = run_cohort(harsh);
    outside = 0;
    for (const double p : result.final_probabilities) {
      if (p <= 0.2 || p >= 0.8) outside += 1;
    }
    // Expected outside fraction is ~0.86; at N = 30 a majority outside is
    // essentially certain.
    CHECK(outside >= 15);
  }
}

TEST_CASE("group disparity") {
  SUBCASE("single group yields no pairs") {
    CohortConfig config;
    config.population = 40;
    config.horizon = 8;
    config.groups = {{"all", 1.0, 0.0, std::nullopt}};
    config.master_seed = 2;
    const auto record = group_disparity(run_cohort(config), 4, 0.5);
    CHECK(record.groups.size() == 1);
    CHECK(record.pairs.empty());
  }

  SUBCASE("time bounds are enforced") {
    const auto result = run_cohort(two_group_config(40, 8, 0.0, 0.0, 2));
    CHECK_THROWS_WITH_AS(group_disparity(result, 0, 0.5), "time out of range",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(group_disparity(result, 9, 0.5), "time out of range",
                         std::invalid_argument);
  }

  SUBCASE("endpoint-only results only answer at the final time") {
    const auto light = run_cohort(two_group_config(40, 8, 0.0, 0.0, 2, false));
    CHECK_NOTHROW(group_disparity(light, 8, 0.5));
    CHECK_THROWS_WITH_AS(group_disparity(light, 3, 0.5), "full paths required",
                         std::invalid_argument);
  }

  SUBCASE("no bias leaves gaps within noise at every time") {
    const auto result = run_cohort(two_group_config(20000, 12, 0.0, 0.0, 31));
    for (const std::size_t t : {1, 6, 12}) {
      const auto record = group_disparity(result, t, 0.5);
      REQUIRE(record.pairs.size() == 1);
      CHECK(std::fabs(record.pairs[0].rate_gap) <=
            3.0 * record.pairs[0].rate_gap_se + 1e-12);
    }
  }

  SUBCASE("a small bias shows up as a decision-rate gap at t = 1") {
    const auto result = run_cohort(two_group_config(200000, 2, 0.1, 0.0, 8));
    const auto record = group_disparity(result, 1, 0.5);
    REQUIRE(record.pairs.size() == 1);
    // Decision rates are 0.6 vs 0.5; the score-threshold fractions at t = 1
    // are degenerate (all scores are exactly 1/2).
    CHECK(record.pairs[0].rate_gap ==
          doctest::Approx(0.1).epsilon(0.15));
    CHECK(record.groups[0].score_fraction == 1.0);
    CHECK(record.groups[1].score_fraction == 1.0);
    CHECK(record.pairs[0].score_gap == 0.0);
  }
}

TEST_CASE("disparity curve") {
  SUBCASE("one record per assessment") {
    const auto result = run_cohort(two_group_config(50, 7, 0.0, 0.0, 4));
    const auto curve = disparity_curve(result, 0.5);
    REQUIRE(curve.size() == 7);
    for (std::size_t t = 0; t < curve.size(); ++t) {
      CHECK(curve[t].time == t + 1);
    }
  }

  SUBCASE("degenerate horizon yields exactly one point") {
    auto config = two_group_config(50, 1, 0.0, 0.0, 4);
    const auto curve = disparity_curve(run_cohort(config), 0.5);
    CHECK(curve.size() == 1);
  }

  SUBCASE("endpoint-only results are rejected") {
    const auto light = run_cohort(two_group_config(50, 7, 0.0, 0.0, 4, false));
    CHECK_THROWS_WITH_AS(disparity_curve(light, 0.5), "full paths required",
                         std::invalid_argument);
  }
}

TEST_CASE("unbiased cohort endpoints follow the limit law") {
  for (const double k : {1.0, 0.1}) {
    CohortConfig config;
    config.population = 1500;
    config.horizon = 500;
    config.params = {1.0, 1.0, k};
    config.groups = {{"all", 1.0, 0.0, std::nullopt}};
    config.master_seed = 61;
    config.record_full_paths = false;
    const auto result = run_cohort(config);
    const auto gof = fit_limit_law(result.final_probabilities, config.params, 0.01);
    CHECK(gof.passed);
  }
}

TEST_CASE("label permutations cover the observed no-bias gap") {
  // With identical groups the labeling is exchangeable: the observed gap
  // should be unremarkable among gaps computed under random relabelings.
  const auto result = run_cohort(two_group_config(300, 25, 0.0, 0.0, 13));
  const std::size_t n = result.config.population;

  std::vector<int> final_high(n);
  for (std::size_t d = 0; d < n; ++d) {
    final_high[d] = is_high_risk(result.final_classifications[d]) ? 1 : 0;
  }
  const auto gap_for = [&](const std::vector<std::uint32_t>& labels) {
    double rate[2] = {0.0, 0.0};
    double count[2] = {0.0, 0.0};
    for (std::size_t d = 0; d < n; ++d) {
      rate[labels[d]] += final_high[d];
      count[labels[d]] += 1.0;
    }
    return std::fabs(rate[0] / count[0] - rate[1] / count[1]);
  };

  const double observed = gap_for(result.group_index);
  std::vector<std::uint32_t> labels = result.group_index;
  std::mt19937_64 rng(55);
  std::vector<double> permuted;
  for (int rep = 0; rep < 500; ++rep) {
    std::shuffle(labels.begin(), labels.end(), rng);
    permuted.push_back(gap_for(labels));
  }
  std::sort(permuted.begin(), permuted.end());
  CHECK(observed <= permuted[494]);  // inside the permutation 99th percentile
}
