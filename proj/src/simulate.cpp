#include "hmjp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hmjp {

int SamplePath::state_at(double t) const {
  if (t < start || t > horizon)
    throw std::out_of_range("path evaluated outside [start, horizon]");
  int state = init_state;
  for (const auto &[time, next] : events) {
    if (time > t) break;
    state = next;
  }
  return state;
}

SamplePath simulate_path(const ChannelPair &ch, int init_state, double horizon,
                         Rng &rng, double start) {
  if (init_state != 0 && init_state != 1)
    throw std::invalid_argument("init_state must be 0 or 1");
  if (!(start >= 0.0) || !(horizon >= start))
    throw std::invalid_argument("simulate_path requires 0 <= start <= horizon");
  SamplePath path;
  path.init_state = init_state;
  path.start = start;
  path.horizon = horizon;
  double now = start;
  int state = init_state;
  while (now < horizon) {
    const RateParams &active = state == 0 ? ch.channel0 : ch.channel1;
    const double next = next_event_time(active, now, rng.exponential());
    if (!(next <= horizon)) break;
    state = 1 - state;
    path.events.emplace_back(next, state);
    now = next;
  }
  return path;
}

std::vector<int> states_at(const SamplePath &path,
                           const std::vector<double> &grid) {
  std::vector<int> states;
  states.reserve(grid.size());
  int state = path.init_state;
  std::size_t next_event = 0;
  double prev = path.start;
  for (double t : grid) {
    if (t < prev)
      throw std::invalid_argument("grid times must be nondecreasing");
    if (t < path.start || t > path.horizon)
      throw std::out_of_range("grid time outside the simulated span");
    while (next_event < path.events.size() &&
           path.events[next_event].first <= t) {
      state = path.events[next_event].second;
      ++next_event;
    }
    states.push_back(state);
    prev = t;
  }
  return states;
}

PanelDataset simulate_panel(const ChannelPair &ch,
                            const std::vector<std::vector<double>> &grids,
                            const InitialDistribution &init, std::uint64_t seed) {
  PanelDataset panel;
  panel.subjects.reserve(grids.size());
  for (std::size_t j = 0; j < grids.size(); ++j) {
    const auto &grid = grids[j];
    if (grid.empty())
      throw std::invalid_argument("subject grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] >= 0.0))
        throw std::invalid_argument("grid times must be nonnegative");
      if (i > 0 && !(grid[i] > grid[i - 1]))
        throw std::invalid_argument("grid times must be strictly increasing");
    }
    Rng rng = Rng::derive(seed, {STREAM_SIM, static_cast<std::uint64_t>(j)});
    const int first = rng.uniform01() < init.pi1 ? 1 : 0;
    PanelDataset::Subject subject;
    subject.id = "s" + std::to_string(j + 1);
    subject.times = grid;
    if (grid.size() == 1) {
      subject.states.push_back(first);
    } else {
      const SamplePath path =
          simulate_path(ch, first, grid.back(), rng, grid.front());
      subject.states = states_at(path, grid);
    }
    panel.subjects.push_back(std::move(subject));
  }
  return panel;
}

PanelDataset simulate_panel_regular(const ChannelPair &ch, long subjects,
                                    long visits, double horizon,
                                    const InitialDistribution &init,
                                    std::uint64_t seed) {
  if (subjects < 1 || visits < 1)
    throw std::invalid_argument("subjects and visits must be >= 1");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  std::vector<double> grid(visits);
  if (visits == 1) {
    grid[0] = 0.0;
  } else {
    for (long i = 0; i < visits; ++i)
      grid[i] = horizon * static_cast<double>(i) / static_cast<double>(visits - 1);
  }
  std::vector<std::vector<double>> grids(subjects, grid);
  return simulate_panel(ch, grids, init, seed);
}

namespace {

// Points of an inhomogeneous Poisson process with the channel's intensity
// on (s,t], by successive hazard inversion.
std::vector<double> ppp_points(const RateParams &p, double s, double t, Rng &rng) {
  std::vector<double> points;
  double now = s;
  for (;;) {
    const double next = next_event_time(p, now, rng.exponential());
    if (!(next <= t)) break;
    points.push_back(next);
    now = next;
  }
  return points;
}

} // namespace

CouplingReport coupling_check(const ChannelPair &ch, double s, double t, long n,
                              Rng &rng) {
  if (!(s < t)) throw std::invalid_argument("coupling_check requires s < t");
  if (n < 1) throw std::invalid_argument("coupling_check requires n >= 1");
  CouplingReport report;
  report.replicates = n;
  report.tv_closed_form = 2.0 * no_event_probability(ch, s, t);
  long end1_from1 = 0, end1_from0 = 0, no_event = 0;
  for (long rep = 0; rep < n; ++rep) {
    const auto pts0 = ppp_points(ch.channel0, s, t, rng); // 0->1 triggers
    const auto pts1 = ppp_points(ch.channel1, s, t, rng); // 1->0 triggers
    // merge the two streams in time order
    std::vector<std::pair<double, int>> merged;
    merged.reserve(pts0.size() + pts1.size());
    for (double u : pts0) merged.emplace_back(u, 0);
    for (double u : pts1) merged.emplace_back(u, 1);
    std::sort(merged.begin(), merged.end());

    int x = 1, xp = 0; // X starts in 1, X' in 0, both driven by the same streams
    bool coupled_from_first = true;
    for (std::size_t k = 0; k < merged.size(); ++k) {
      const int channel = merged[k].second;
      if (channel == 0) { // a point of the lambda0 process fires 0->1
        if (x == 0) x = 1;
        if (xp == 0) xp = 1;
      } else { // lambda1 process fires 1->0
        if (x == 1) x = 0;
        if (xp == 1) xp = 0;
      }
      if (x != xp) coupled_from_first = false;
    }
    if (merged.empty()) {
      ++no_event;
      ++report.coupled_after_first_event; // vacuously: no event to couple at
    } else {
      ++report.replicates_with_events;
      if (coupled_from_first) ++report.coupled_after_first_event;
    }
    end1_from1 += x;
    end1_from0 += xp;
  }
  const double nd = static_cast<double>(n);
  const double p1_from1 = static_cast<double>(end1_from1) / nd;
  const double p1_from0 = static_cast<double>(end1_from0) / nd;
  report.empirical_tv =
      std::abs(p1_from1 - p1_from0) + std::abs((1.0 - p1_from1) - (1.0 - p1_from0));
  report.empirical_no_event = static_cast<double>(no_event) / nd;
  return report;
}

} // namespace hmjp
