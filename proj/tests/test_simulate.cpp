#include <doctest.h>

#include <cmath>

#include "hmjp/simulate.hpp"
#include "oracle.hpp"

using namespace hmjp;

TEST_CASE("simulate_path basics") {
  SUBCASE("silent generator produces no events") {
    const ChannelPair ch{make_constant(0.0), make_constant(0.0)};
    Rng rng(1);
    const SamplePath path = simulate_path(ch, 0, 50.0, rng);
    CHECK(path.events.empty());
    CHECK(path.state_at(50.0) == 0);
  }
  SUBCASE("events alternate states and increase in time") {
    Rng rng(2);
    const SamplePath path =
        simulate_path(ChannelPair{make_constant(0.5), make_constant(0.7)}, 0, 100.0, rng);
    int state = 0;
    double last = 0.0;
    for (const auto &[time, next] : path.events) {
      CHECK(time > last);
      CHECK(time <= 100.0);
      CHECK(next == 1 - state);
      state = next;
      last = time;
    }
    CHECK(path.events.size() > 10); // ~60 expected
  }
  SUBCASE("holding times in state 0 are exponential under constant rates") {
    const double lambda0 = 0.5;
    const ChannelPair ch{make_constant(lambda0), make_constant(0.7)};
    std::vector<double> holds;
    for (int i = 0; i < 10000; ++i) {
      Rng rng = Rng::derive(42, {STREAM_TEST, static_cast<std::uint64_t>(i)});
      const SamplePath path = simulate_path(ch, 0, 400.0, rng);
      REQUIRE_FALSE(path.events.empty());
      holds.push_back(path.events.front().first);
    }
    const double d = oracle::ks_statistic(
        holds, [&](double x) { return 1.0 - std::exp(-lambda0 * x); });
    CHECK(d < oracle::ks_critical(0.01, holds.size()));
  }
  SUBCASE("occupancy frequency matches the quadrature oracle") {
    const ChannelPair ch = oracle::table1_channels();
    const TransitionMatrix truth = tpm_quadrature(ch, 0.0, 10.0, 1e-10);
    oracle::Accumulator acc;
    for (int i = 0; i < 20000; ++i) {
      Rng rng = Rng::derive(77, {STREAM_TEST, static_cast<std::uint64_t>(i)});
      const SamplePath path = simulate_path(ch, 0, 10.0, rng);
      acc.add(path.state_at(10.0) == 1 ? 1.0 : 0.0);
    }
    CHECK(std::abs(acc.mean() - truth.p01) < 3.0 * acc.se());
  }
}

TEST_CASE("states_at evaluation") {
  SamplePath path;
  path.init_state = 0;
  path.start = 0.0;
  path.horizon = 10.0;
  path.events = {{2.0, 1}, {5.0, 0}, {7.5, 1}};
  SUBCASE("grid of just the origin") {
    CHECK(states_at(path, {0.0}) == std::vector<int>{0});
  }
  SUBCASE("right continuity at event times") {
    CHECK(states_at(path, {2.0}) == std::vector<int>{1});
    CHECK(states_at(path, {5.0}) == std::vector<int>{0});
    CHECK(states_at(path, {1.999999, 2.0, 4.0, 7.5, 10.0}) ==
          std::vector<int>{0, 1, 1, 1, 1});
  }
  SUBCASE("out-of-range grid rejected") {
    CHECK_THROWS_AS(states_at(path, {11.0}), std::out_of_range);
    CHECK_THROWS_AS(states_at(path, {3.0, 2.0}), std::invalid_argument);
  }
  SUBCASE("dense grid reconstructs the event list") {
    Rng rng(3);
    const SamplePath sim =
        simulate_path(ChannelPair{make_constant(0.4), make_constant(0.6)}, 1, 20.0, rng);
    std::vector<double> grid;
    for (int i = 0; i <= 20000; ++i) grid.push_back(i * 1e-3);
    const std::vector<int> states = states_at(sim, grid);
    std::vector<double> change_points;
    for (std::size_t i = 1; i < states.size(); ++i)
      if (states[i] != states[i - 1]) change_points.push_back(grid[i]);
    REQUIRE(change_points.size() == sim.events.size());
    for (std::size_t k = 0; k < change_points.size(); ++k) {
      CHECK(sim.events[k].first <= change_points[k]);
      CHECK(sim.events[k].first > change_points[k] - 1.5e-3);
    }
    // coarse grid values are a subsequence of fine grid values at shared times
    std::vector<int> coarse_index;
    std::vector<double> coarse;
    for (int i = 0; i <= 20000; i += 500) {
      coarse_index.push_back(i);
      coarse.push_back(grid[i]);
    }
    const std::vector<int> coarse_states = states_at(sim, coarse);
    for (std::size_t i = 0; i < coarse.size(); ++i)
      CHECK(coarse_states[i] == states[static_cast<std::size_t>(coarse_index[i])]);
  }
}

TEST_CASE("simulate_panel") {
  const InitialDistribution init = make_initial_distribution(0.5);
  SUBCASE("single-point grids draw from the initial distribution") {
    std::vector<std::vector<double>> grids(20000, std::vector<double>{3.0});
    const PanelDataset panel =
        simulate_panel(oracle::table1_channels(), grids, init, 99);
    oracle::Accumulator acc;
    for (const auto &subject : panel.subjects)
      acc.add(static_cast<double>(subject.states.front()));
    CHECK(std::abs(acc.mean() - 0.5) < 3.0 * acc.se());
  }
  SUBCASE("configured sizes are exact") {
    const PanelDataset panel =
        simulate_panel_regular(oracle::table3_channels(), 100, 50, 100.0, init, 1);
    CHECK(panel.subjects.size() == 100);
    CHECK(panel.num_observations() == 5000);
    CHECK(panel.num_intervals() == 4900);
    for (const auto &subject : panel.subjects) {
      CHECK(subject.times.front() == 0.0);
      CHECK(subject.times.back() == 100.0);
    }
  }
  SUBCASE("one-step frequencies match the closed form") {
    const double l0 = 0.3, l1 = 0.5, dt = 1.0;
    const PanelDataset panel = simulate_panel_regular(
        ChannelPair{make_constant(l0), make_constant(l1)}, 400, 101, 100.0, init, 17);
    const TransitionMatrix m = tpm_closed_form_constant(l0, l1, 0.0, dt);
    oracle::Accumulator from0, from1;
    for (const auto &subject : panel.subjects)
      for (std::size_t i = 1; i < subject.states.size(); ++i) {
        if (subject.states[i - 1] == 0)
          from0.add(subject.states[i] == 1 ? 1.0 : 0.0);
        else
          from1.add(subject.states[i] == 0 ? 1.0 : 0.0);
      }
    CHECK(std::abs(from0.mean() - m.p01) < 3.0 * from0.se());
    CHECK(std::abs(from1.mean() - m.p10) < 3.0 * from1.se());
  }
  SUBCASE("grid validation errors") {
    CHECK_THROWS_AS(simulate_panel(oracle::table3_channels(), {{}}, init, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_panel(oracle::table3_channels(), {{1.0, 1.0}}, init, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("coupling check") {
  SUBCASE("silent generator never couples") {
    Rng rng(4);
    const ChannelPair ch{make_constant(0.0), make_constant(0.0)};
    const CouplingReport rep = coupling_check(ch, 0.0, 5.0, 2000, rng);
    CHECK(rep.empirical_tv == doctest::Approx(2.0));
    CHECK(rep.tv_closed_form == doctest::Approx(2.0));
    CHECK(rep.replicates_with_events == 0);
  }
  SUBCASE("fast mixing couples immediately") {
    Rng rng(5);
    const ChannelPair ch{make_constant(4.0), make_constant(4.0)};
    const CouplingReport rep = coupling_check(ch, 0.0, 10.0, 2000, rng);
    CHECK(rep.empirical_tv < 0.05);
    CHECK(rep.coupled_after_first_event == rep.replicates);
  }
  SUBCASE("coupling identity at the nonhomogeneous truth") {
    Rng rng(6);
    const CouplingReport rep =
        coupling_check(oracle::table1_channels(), 1.0, 10.0, 20000, rng);
    CHECK(rep.coupled_after_first_event == rep.replicates);
    // frozen closed form: 2 exp(-L0(1,10) - L1(1,10))
    CHECK(rep.tv_closed_form == doctest::Approx(1.6192019425081645).epsilon(1e-12));
    // under shared streams the end states differ exactly on the no-event set
    CHECK(rep.empirical_tv == doctest::Approx(2.0 * rep.empirical_no_event));
    const double p = rep.empirical_no_event;
    const double se = 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(rep.replicates));
    CHECK(std::abs(rep.empirical_tv - rep.tv_closed_form) < 3.0 * se);
  }
}
