#pragma once
// Seeded Monte Carlo trajectory statistics.  Simulation output is descriptive
// evidence, never proof: finite samples cannot decide Fin/Inf events.  All
// randomness flows through the counter RNG under the (seed, trajectory index)
// contract, so identical parameters reproduce bit-identical series.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "streett/chain.hpp"
#include "streett/rng.hpp"
#include "streett/trajectory.hpp"

namespace streett {

template <class S>
struct SeriesRow {
  std::uint64_t trajectory;
  std::uint64_t n;
  S state;
  double statistic;
};

template <class S>
struct SimulationSeries {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  std::uint64_t trajectories = 0;
  std::uint64_t stride = 100;
  std::map<std::string, Rational> params;
  // Grouped by trajectory, times strictly increasing within each group.
  std::vector<SeriesRow<S>> rows;
};

// Tracks statistic(current state) along sampled trajectories, recorded at
// time 0, every `stride` steps, and at the final step.
template <class S>
SimulationSeries<S> simulate_return_probability(const MarkovChain<S>& chain,
                                                const std::function<double(const S&)>& statistic,
                                                std::uint64_t steps, std::uint64_t trajectories,
                                                std::uint64_t seed, std::uint64_t stride = 100) {
  if (stride == 0) fail("BadParameter", "recording stride must be positive");
  SimulationSeries<S> series;
  series.seed = seed;
  series.steps = steps;
  series.trajectories = trajectories;
  series.stride = stride;
  for (std::uint64_t t = 0; t < trajectories; ++t) {
    CounterRng rng(seed, t);
    S state = sample_from(chain.initial, rng.next_unit());
    series.rows.push_back({t, 0, state, statistic(state)});
    for (std::uint64_t n = 1; n <= steps; ++n) {
      state = sample_from(chain.kernel(state), rng.next_unit());
      if (n % stride == 0 || n == steps)
        series.rows.push_back({t, n, state, statistic(state)});
    }
  }
  return series;
}

// Fraction of the time indices 0..steps-1 spent inside the region, per
// trajectory.
template <class S>
std::vector<double> visit_frequency(const MarkovChain<S>& chain, const Region<S>& region,
                                    std::uint64_t steps, std::uint64_t trajectories,
                                    std::uint64_t seed) {
  if (steps == 0) fail("BadParameter", "visit_frequency needs at least one step");
  std::vector<double> freqs;
  for (std::uint64_t t = 0; t < trajectories; ++t) {
    CounterRng rng(seed, t);
    S state = sample_from(chain.initial, rng.next_unit());
    std::uint64_t hits = region.member(state) ? 1 : 0;
    for (std::uint64_t n = 1; n < steps; ++n) {
      state = sample_from(chain.kernel(state), rng.next_unit());
      if (region.member(state)) ++hits;
    }
    freqs.push_back(static_cast<double>(hits) / static_cast<double>(steps));
  }
  return freqs;
}

template <class S>
void write_csv(const SimulationSeries<S>& series, std::ostream& out) {
  out << "trajectory,n,state,statistic\n";
  char buf[64];
  for (const auto& row : series.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", row.statistic);
    out << row.trajectory << ',' << row.n << ',' << state_to_string<S>(row.state) << ',' << buf
        << '\n';
  }
}

}  // namespace streett
