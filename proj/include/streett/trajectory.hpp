#pragma once
// Finite trajectory prefixes: hitting and return times, the shift operator,
// cylinder-set probabilities, and seeded sampling.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "streett/chain.hpp"
#include "streett/rng.hpp"

namespace streett {

template <class S>
struct Trajectory {
  std::vector<S> states;
  std::uint64_t seed = 0;    // provenance when sampled
  std::uint64_t stream = 0;
};

// Least n with states[n] in the region; empty when the prefix never hits it.
template <class S>
std::optional<std::size_t> first_hitting_time(const Trajectory<S>& t, const Region<S>& region) {
  for (std::size_t n = 0; n < t.states.size(); ++n)
    if (region.member(t.states[n])) return n;
  return std::nullopt;
}

// Least n >= 1 with states[n] in the region: one step, then first hit.
template <class S>
std::optional<std::size_t> first_return_time(const Trajectory<S>& t, const Region<S>& region) {
  for (std::size_t n = 1; n < t.states.size(); ++n)
    if (region.member(t.states[n])) return n;
  return std::nullopt;
}

// Drops the first n states.
template <class S>
Trajectory<S> shift(const Trajectory<S>& t, std::size_t n) {
  if (n >= t.states.size())
    fail("IndexOutOfRange", "shift by " + std::to_string(n) + " on a prefix of length " +
                                std::to_string(t.states.size()));
  Trajectory<S> out;
  out.states.assign(t.states.begin() + static_cast<std::ptrdiff_t>(n), t.states.end());
  out.seed = t.seed;
  out.stream = t.stream;
  return out;
}

// Probability that state j lies in constraints[j] for all j, computed by
// propagating the finitely supported state measure forward.  An empty
// constraint list is the trivial cylinder of probability 1.
template <class S>
Probability prefix_probability(const MarkovChain<S>& chain,
                               const std::vector<Region<S>>& constraints) {
  if (constraints.empty()) return Rational(1);
  std::map<S, Rational> mass;
  for (const auto& [s, p] : chain.initial.support)
    if (constraints[0].member(s)) mass[s] += p;
  for (std::size_t j = 1; j < constraints.size() && !mass.empty(); ++j) {
    std::map<S, Rational> next;
    for (const auto& [s, p] : mass)
      for (const auto& [u, q] : chain.kernel(s).support)
        if (constraints[j].member(u)) next[u] += p * q;
    mass = std::move(next);
  }
  Rational total(0);
  for (const auto& [s, p] : mass) total += p;
  return total;
}

// Draws one successor from a distribution; u is uniform in [0,1).
template <class S>
const S& sample_from(const Distribution<S>& d, const Probability& u) {
  Rational acc(0);
  for (const auto& [s, p] : d.support) {
    acc += p;
    if (u < acc) return s;
  }
  return d.support.back().first;  // unreachable for valid distributions
}

// Samples `length` states (the initial state plus length-1 steps) from the
// counter stream (seed, stream).
template <class S>
Trajectory<S> sample_trajectory(const MarkovChain<S>& chain, std::size_t length,
                                std::uint64_t seed, std::uint64_t stream) {
  if (length == 0) fail("IndexOutOfRange", "trajectory length must be positive");
  CounterRng rng(seed, stream);
  Trajectory<S> t;
  t.seed = seed;
  t.stream = stream;
  t.states.reserve(length);
  t.states.push_back(sample_from(chain.initial, rng.next_unit()));
  for (std::size_t n = 1; n < length; ++n)
    t.states.push_back(sample_from(chain.kernel(t.states.back()), rng.next_unit()));
  return t;
}

}  // namespace streett
