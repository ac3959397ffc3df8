#pragma once
// Certified reachability brackets on infinite chains via two-sided window
// truncation.  The pessimistic solve treats leaving the window as failure,
// the optimistic one as immediate success; the true hitting probability lies
// between the two for every window containing the start distribution.

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "streett/oracle.hpp"

namespace streett {

struct ProbabilityInterval {
  Rational lower{0};
  Rational upper{1};
};

template <class S>
ProbabilityInterval bounded_reach_interval(const MarkovChain<S>& chain, const Region<S>& target,
                                           std::vector<S> window, const Distribution<S>& from) {
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());
  if (window.empty()) fail("WindowNotClosed", "empty truncation window");
  std::map<S, int> index;
  for (std::size_t k = 0; k < window.size(); ++k) index[window[k]] = static_cast<int>(k);
  for (const auto& [s, p] : from.support)
    if (!index.count(s))
      fail("WindowNotClosed",
           "start state " + state_to_string<S>(s) + " lies outside the window");

  // Shared truncated rows; all mass leaving the window funnels to one sink.
  const int sink = static_cast<int>(window.size());
  detail::Rows rows(window.size() + 1);
  for (std::size_t k = 0; k < window.size(); ++k) {
    Rational exit_mass(0);
    std::map<int, Rational> merged;
    for (const auto& [u, p] : chain.kernel(window[k]).support) {
      auto it = index.find(u);
      if (it == index.end())
        exit_mass += p;
      else
        merged[it->second] += p;
    }
    for (const auto& [to, p] : merged) rows[k].emplace_back(to, p);
    if (exit_mass > 0) rows[k].emplace_back(sink, exit_mass);
  }
  rows[static_cast<std::size_t>(sink)].emplace_back(sink, Rational(1));

  std::vector<char> pessimistic(window.size() + 1, 0);
  for (std::size_t k = 0; k < window.size(); ++k)
    pessimistic[k] = target.member(window[k]) ? 1 : 0;
  std::vector<char> optimistic = pessimistic;
  optimistic[static_cast<std::size_t>(sink)] = 1;

  const std::vector<Rational> lo = detail::hitting_vector(rows, pessimistic);
  const std::vector<Rational> hi = detail::hitting_vector(rows, optimistic);
  ProbabilityInterval out;
  out.lower = 0;
  out.upper = 0;
  for (const auto& [s, p] : from.support) {
    const auto k = static_cast<std::size_t>(index.at(s));
    out.lower += p * lo[k];
    out.upper += p * hi[k];
  }
  return out;
}

}  // namespace streett
