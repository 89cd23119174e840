#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "riskurn/rng.hpp"
#include "riskurn/urn.hpp"

using namespace riskurn;

TEST_CASE("initial probability") {
  CHECK(initial_probability({1.0, 1.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(initial_probability({3.0, 1.0, 1.0}) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(initial_probability({1.0, 0.0, 1.0}),
                       "invalid urn composition", std::invalid_argument);
  CHECK_THROWS_AS(initial_probability({-1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(initial_probability({1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("gamma weight") {
  const UrnParameters classic = UrnParameters::classic();
  CHECK(gamma_weight(2, classic) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(gamma_weight(2, {1.0, 1.0, 10.0}) ==
        doctest::Approx(2.0 / 12.0).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(gamma_weight(1, classic),
                       "weight undefined before second decision",
                       std::invalid_argument);

  // First-decision weight in the unit urn.
  CHECK(classic_gamma_weight(1) == 0.5);
  CHECK_THROWS_AS(classic_gamma_weight(0), std::invalid_argument);

  // For the unit urn n_(i-2) = i holds exactly, so the generalized weight
  // coincides with i/(i+1) at every index.
  for (std::uint64_t i = 2; i <= 200; ++i) {
    CHECK(gamma_weight(i, classic) == classic_gamma_weight(i));
  }
}

TEST_CASE("update probability") {
  const UrnParameters classic = UrnParameters::classic();
  CHECK(update_probability(0.5, Classification::high_risk, 2, classic) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(update_probability(0.5, Classification::low_risk, 2, classic) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(update_probability(1.5, Classification::high_risk, 2, classic),
                  std::invalid_argument);

  SUBCASE("p = 1 is a fixed point of high-risk updates") {
    for (const double k : {1.0, 0.1, 10.0}) {
      const UrnParameters params{1.0, 1.0, k};
      for (std::uint64_t i : {2, 3, 10, 1000}) {
        CHECK(update_probability(1.0, Classification::high_risk, i, params) == 1.0);
      }
    }
  }

  SUBCASE("one-step martingale identity") {
    std::mt19937_64 rng(11);
    const UrnParameters params{2.0, 3.0, 0.7};
    for (int trial = 0; trial < 200; ++trial) {
      const double p = uniform01(rng);
      const std::uint64_t i = 2 + (rng() % 50);
      const double expected =
          p * update_probability(p, Classification::high_risk, i, params) +
          (1.0 - p) * update_probability(p, Classification::low_risk, i, params);
      CHECK(expected == doctest::Approx(p).epsilon(1e-14));
    }
  }
}

TEST_CASE("urn step") {
  const UrnParameters classic = UrnParameters::classic();
  const UrnState start = UrnState::initial(classic);

  auto [blue_state, blue_draw] = step(start, classic, 0.3);
  CHECK(blue_draw == Classification::high_risk);
  CHECK(blue_state.blue == 2.0);
  CHECK(blue_state.red == 1.0);
  CHECK(blue_state.step == 1);

  auto [red_state, red_draw] = step(start, classic, 0.9);
  CHECK(red_draw == Classification::low_risk);
  CHECK(red_state.blue == 1.0);
  CHECK(red_state.red == 2.0);

  SUBCASE("added mass is exactly k") {
    const UrnParameters params{2.0, 1.0, 0.25};
    UrnState state = UrnState::initial(params);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
      const double before = state.total();
      state = step(state, params, uniform01(rng)).first;
      CHECK(state.total() - before == params.increment);
    }
  }

  SUBCASE("tie draw at exactly p picks red") {
    auto [state, draw] = step(start, classic, 0.5);
    CHECK(draw == Classification::low_risk);
    (void)state;
  }
}

TEST_CASE("counts to probability") {
  CHECK(counts_to_probability({2.0, 1.0, 1}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(counts_to_probability({7.5, 7.5, 4}) == 0.5);
  CHECK(counts_to_probability({1.0, 3.0, 2}) == 0.25);
  CHECK_THROWS_AS(counts_to_probability({0.0, 1.0, 0}), std::invalid_argument);
}

TEST_CASE("simulate_path basics") {
  const UrnParameters classic = UrnParameters::classic();

  SUBCASE("identical seeds give identical trajectories") {
    const auto a = simulate_path(classic, 10, 7);
    const auto b = simulate_path(classic, 10, 7);
    CHECK(a == b);
    const auto c = simulate_path(classic, 10, 8);
    CHECK(a.probabilities != c.probabilities);
  }

  SUBCASE("shape and start") {
    const auto traj = simulate_path({3.0, 1.0, 0.5}, 25, 42);
    CHECK(traj.horizon() == 25);
    CHECK(traj.classifications.size() == 25);
    CHECK(traj.probabilities.front() == doctest::Approx(0.75).epsilon(1e-15));
    for (const double p : traj.probabilities) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }

  SUBCASE("huge urn pins the score near its start") {
    const UrnParameters heavy{1e6, 1e6, 1.0};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto traj = simulate_path(heavy, 10, seed);
      for (const double p : traj.probabilities) {
        CHECK(std::fabs(p - 0.5) < 1e-5);
      }
    }
  }

  SUBCASE("only two branches exist at T = 2") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto traj = simulate_path(classic, 2, seed);
      const double p2 = traj.probabilities[1];
      const bool is_third = std::fabs(p2 - 1.0 / 3.0) < 1e-15;
      const bool is_two_thirds = std::fabs(p2 - 2.0 / 3.0) < 1e-15;
      CHECK((is_third || is_two_thirds));
      // The branch taken matches the recorded classification.
      CHECK(is_two_thirds == is_high_risk(traj.classifications[0]));
    }
  }

  CHECK_THROWS_WITH_AS(simulate_path(classic, 0, 1), "empty horizon",
                       std::invalid_argument);
}

TEST_CASE("recursion route matches ball-count route along random paths") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const UrnParameters params{0.1 + 9.9 * uniform01(rng),
                               0.1 + 9.9 * uniform01(rng),
                               0.05 + 9.95 * uniform01(rng)};
    const auto traj = simulate_path(params, 200, rng());

    UrnState state = UrnState::initial(params);
    for (std::size_t i = 0; i < traj.horizon(); ++i) {
      const double from_counts = counts_to_probability(state);
      const double from_recursion = traj.probabilities[i];
      CHECK(std::fabs(from_recursion - from_counts) <=
            1e-12 * std::max(from_counts, 1e-300));
      // Drive the replayed urn with the recorded classification.
      const double replay_draw =
          is_high_risk(traj.classifications[i]) ? 0.0 : 1.0 - 1e-12;
      const auto [next, drawn] = step(state, params, replay_draw);
      CHECK(drawn == traj.classifications[i]);
      state = next;
    }
  }
}

TEST_CASE("mass conservation along replayed paths") {
  SUBCASE("exact for binary-representable increments") {
    for (const double k : {1.0, 0.25, 10.0}) {
      const UrnParameters params{1.0, 1.0, k};
      UrnState state = UrnState::initial(params);
      std::mt19937_64 rng(5);
      for (std::uint64_t i = 1; i <= 200; ++i) {
        state = step(state, params, uniform01(rng)).first;
        CHECK(state.total() ==
              params.initial_total() + static_cast<double>(i) * k);
        CHECK(state.step == i);
        CHECK(state.blue >= params.blue_initial);
        CHECK(state.red >= params.red_initial);
      }
    }
  }
  SUBCASE("tight for k = 0.1") {
    const UrnParameters params{1.0, 1.0, 0.1};
    UrnState state = UrnState::initial(params);
    std::mt19937_64 rng(6);
    for (std::uint64_t i = 1; i <= 200; ++i) {
      state = step(state, params, uniform01(rng)).first;
      CHECK(state.total() ==
            doctest::Approx(2.0 + static_cast<double>(i) * 0.1).epsilon(1e-12));
    }
  }
}

TEST_CASE("step sizes shrink like k / n") {
  const UrnParameters classic = UrnParameters::classic();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto traj = simulate_path(classic, 150, seed);
    for (std::size_t i = 1; i < traj.horizon(); ++i) {
      const double bound =
          classic.increment /
          (classic.initial_total() + static_cast<double>(i - 1) * classic.increment);
      CHECK(std::fabs(traj.probabilities[i] - traj.probabilities[i - 1]) <=
            bound + 1e-15);
    }
  }
}

TEST_CASE("seed streams are order-independent") {
  CHECK(stream_seed(7, seed_domain::defendant, 0) !=
        stream_seed(7, seed_domain::defendant, 1));
  CHECK(stream_seed(7, seed_domain::defendant, 3) !=
        stream_seed(8, seed_domain::defendant, 3));
  CHECK(stream_seed(7, seed_domain::defendant, 3) !=
        stream_seed(7, seed_domain::repetition, 3));
  CHECK(stream_seed(7, seed_domain::bootstrap, 5) ==
        stream_seed(7, seed_domain::bootstrap, 5));
}
