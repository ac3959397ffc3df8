#pragma once
// Shared test scaffolding: a deterministic random-chain generator for the
// property suites, and small option helpers.  All randomness flows through
// CounterRng with fixed seeds so every run sees the same chains.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "streett/builtins.hpp"
#include "streett/certificates.hpp"
#include "streett/rng.hpp"

namespace streett::testing {

// Chain over {0..n-1} with 1..3 successors per state, exact rational rows,
// initial delta at 0, and 1..max_pairs random Streett pairs.
inline Model<std::int64_t> random_chain(CounterRng& rng, int max_states = 12,
                                        int max_pairs = 2) {
  const int n = 2 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_states - 1));
  Model<std::int64_t> m;
  std::vector<std::int64_t> universe;
  for (int s = 0; s < n; ++s) universe.push_back(s);
  m.chain.universe = universe;
  m.chain.initial = dirac<std::int64_t>(0);
  auto rows = std::make_shared<std::map<std::int64_t, Distribution<std::int64_t>>>();
  for (int s = 0; s < n; ++s) {
    const int out_degree = 1 + static_cast<int>(rng.next_u64() % 3);
    std::map<std::int64_t, Rational> weights;
    for (int j = 0; j < out_degree; ++j) {
      const auto to = static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(n));
      weights[to] += Rational(1 + static_cast<long>(rng.next_u64() % 4));
    }
    Rational total(0);
    for (const auto& [to, w] : weights) total += w;
    std::vector<std::pair<std::int64_t, Rational>> entries;
    for (const auto& [to, w] : weights) entries.emplace_back(to, w / total);
    (*rows)[s] = make_distribution<std::int64_t>(entries);
  }
  m.chain.kernel = [rows](const std::int64_t& s) { return rows->at(s); };
  const int pairs = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_pairs));
  for (int i = 0; i < pairs; ++i) {
    std::vector<std::int64_t> a, b;
    for (int s = 0; s < n; ++s) {
      if (rng.next_u64() % 4 == 0) a.push_back(s);
      if (rng.next_u64() % 4 == 0) b.push_back(s);
    }
    m.streett.pairs.push_back({region_from_states<std::int64_t>("A" + std::to_string(i + 1), a),
                               region_from_states<std::int64_t>("B" + std::to_string(i + 1), b)});
  }
  return m;
}

inline CheckOptions exact_options(std::vector<Rational> grid = {Rational(0), Rational(1),
                                                                Rational(2)}) {
  CheckOptions opts;
  opts.r_grid = std::move(grid);
  return opts;
}

inline Region<std::string> named(const std::string& name, std::vector<std::string> states) {
  return region_from_states<std::string>(name, std::move(states));
}

}  // namespace streett::testing
