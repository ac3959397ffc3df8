#pragma once
// Exact analysis of finite-universe chains: BSCC decomposition, hitting and
// return probabilities through rational linear solves, Streett acceptance
// probabilities through accepting BSCCs, and the positive-return test.
//
// Hitting probabilities are solved after a graph pre-pass: states that cannot
// reach the target are pinned to 0, target states to 1, and the remaining
// system (I - P) h = P * 1_target is nonsingular because every remaining state
// leaves the transient part with positive probability.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <utility>
#include <vector>

#include "streett/chain.hpp"
#include "streett/linalg.hpp"

namespace streett {

template <class S>
using ProbabilityVector = std::map<S, Probability>;

namespace detail {

using Rows = std::vector<std::vector<std::pair<int, Probability>>>;

// Iterative Tarjan; returns the component id of every node, components
// numbered in reverse topological order (a component's successors have
// smaller ids).
inline std::vector<int> scc_components(const Rows& rows, int& component_count) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  int next_num = 0;
  component_count = 0;

  struct Frame {
    int node;
    std::size_t edge;
  };
  std::vector<Frame> frames;

  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    frames.push_back({root, 0});
    num[root] = low[root] = next_num++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < rows[f.node].size()) {
        int to = rows[f.node][f.edge++].first;
        if (num[to] == -1) {
          num[to] = low[to] = next_num++;
          stack.push_back(to);
          on_stack[to] = 1;
          frames.push_back({to, 0});
        } else if (on_stack[to]) {
          low[f.node] = std::min(low[f.node], num[to]);
        }
      } else {
        int v = f.node;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().node] = std::min(low[frames.back().node], low[v]);
        if (low[v] == num[v]) {
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = component_count;
            if (w == v) break;
          }
          ++component_count;
        }
      }
    }
  }
  return comp;
}

// Component ids whose members have no edge leaving the component.
inline std::vector<char> bottom_components(const Rows& rows, const std::vector<int>& comp,
                                           int component_count) {
  std::vector<char> bottom(static_cast<std::size_t>(component_count), 1);
  for (std::size_t v = 0; v < rows.size(); ++v)
    for (const auto& [to, p] : rows[v])
      if (comp[v] != comp[to]) bottom[static_cast<std::size_t>(comp[v])] = 0;
  return bottom;
}

inline std::vector<char> forward_reachable(const Rows& rows, const std::vector<int>& starts) {
  std::vector<char> seen(rows.size(), 0);
  std::queue<int> q;
  for (int s : starts)
    if (!seen[s]) {
      seen[s] = 1;
      q.push(s);
    }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const auto& [to, p] : rows[v])
      if (!seen[to]) {
        seen[to] = 1;
        q.push(to);
      }
  }
  return seen;
}

// States with a positive-probability path into the target set.
inline std::vector<char> can_reach(const Rows& rows, const std::vector<char>& target) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::vector<int>> rev(n);
  for (int v = 0; v < n; ++v)
    for (const auto& [to, p] : rows[v]) rev[to].push_back(v);
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  for (int v = 0; v < n; ++v)
    if (target[v]) {
      seen[v] = 1;
      q.push(v);
    }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int from : rev[v])
      if (!seen[from]) {
        seen[from] = 1;
        q.push(from);
      }
  }
  return seen;
}

// h(s) = P(tau_target < inf) from s, for every node.
inline std::vector<Rational> hitting_vector(const Rows& rows, const std::vector<char>& target) {
  const int n = static_cast<int>(rows.size());
  std::vector<char> reach = can_reach(rows, target);
  std::vector<int> sys_index(n, -1);
  std::vector<int> sys_nodes;
  for (int v = 0; v < n; ++v)
    if (reach[v] && !target[v]) {
      sys_index[v] = static_cast<int>(sys_nodes.size());
      sys_nodes.push_back(v);
    }
  std::vector<Rational> h(n, Rational(0));
  for (int v = 0; v < n; ++v)
    if (target[v]) h[v] = 1;
  const std::size_t m = sys_nodes.size();
  if (m > 0) {
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    std::vector<std::vector<Rational>> b(1, std::vector<Rational>(m, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
      a[i][i] = 1;
      for (const auto& [to, p] : rows[sys_nodes[i]]) {
        if (target[to])
          b[0][i] += p;
        else if (sys_index[to] >= 0)
          a[i][static_cast<std::size_t>(sys_index[to])] -= p;
      }
    }
    auto x = solve_linear(std::move(a), std::move(b));
    for (std::size_t i = 0; i < m; ++i) h[sys_nodes[i]] = x[0][i];
  }
  return h;
}

// w(s) = expected steps until the target is hit; requires almost-sure hitting
// from every non-target node.
inline std::vector<Rational> expected_steps_vector(const Rows& rows,
                                                   const std::vector<char>& target) {
  const int n = static_cast<int>(rows.size());
  std::vector<Rational> h = hitting_vector(rows, target);
  for (int v = 0; v < n; ++v)
    if (h[v] != 1)
      fail("NotAlmostSure", "expected hitting time undefined: hit probability " +
                                format_rational(h[v]) + " at node " + std::to_string(v));
  std::vector<int> sys_index(n, -1);
  std::vector<int> sys_nodes;
  for (int v = 0; v < n; ++v)
    if (!target[v]) {
      sys_index[v] = static_cast<int>(sys_nodes.size());
      sys_nodes.push_back(v);
    }
  std::vector<Rational> w(n, Rational(0));
  const std::size_t m = sys_nodes.size();
  if (m > 0) {
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    std::vector<std::vector<Rational>> b(1, std::vector<Rational>(m, Rational(1)));
    for (std::size_t i = 0; i < m; ++i) {
      a[i][i] = 1;
      for (const auto& [to, p] : rows[sys_nodes[i]])
        if (sys_index[to] >= 0) a[i][static_cast<std::size_t>(sys_index[to])] -= p;
    }
    auto x = solve_linear(std::move(a), std::move(b));
    for (std::size_t i = 0; i < m; ++i) w[sys_nodes[i]] = x[0][i];
  }
  return w;
}

// Minimal number of steps to the target along positive-probability edges;
// requires reachability from every node.
inline std::vector<std::uint64_t> bfs_distance_vector(const Rows& rows,
                                                      const std::vector<char>& target) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::vector<int>> rev(n);
  for (int v = 0; v < n; ++v)
    for (const auto& [to, p] : rows[v]) rev[to].push_back(v);
  const std::uint64_t unset = ~0ULL;
  std::vector<std::uint64_t> dist(n, unset);
  std::queue<int> q;
  for (int v = 0; v < n; ++v)
    if (target[v]) {
      dist[v] = 0;
      q.push(v);
    }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int from : rev[v])
      if (dist[from] == unset) {
        dist[from] = dist[v] + 1;
        q.push(from);
      }
  }
  for (int v = 0; v < n; ++v)
    if (dist[v] == unset)
      fail("NotAlmostSure", "target unreachable from node " + std::to_string(v));
  return dist;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Indexed view of a finite chain.

template <class S>
struct FiniteIndex {
  std::vector<S> states;  // sorted universe
  std::map<S, int> index;
  detail::Rows rows;
  std::vector<std::pair<int, Probability>> initial;

  static FiniteIndex build(const MarkovChain<S>& chain) {
    FiniteIndex fi;
    fi.states = universe_of(chain);
    for (std::size_t i = 0; i < fi.states.size(); ++i)
      fi.index.emplace(fi.states[i], static_cast<int>(i));
    if (fi.index.size() != fi.states.size())
      fail("ValidationError", "universe contains duplicate states");
    fi.rows.resize(fi.states.size());
    for (std::size_t i = 0; i < fi.states.size(); ++i) {
      const Distribution<S> d = chain.kernel(fi.states[i]);
      Rational sum(0);
      for (const auto& [u, p] : d.support) {
        auto it = fi.index.find(u);
        if (it == fi.index.end())
          fail("StateOutsideUniverse",
               "kernel at " + state_to_string<S>(fi.states[i]) + " reaches " +
                   state_to_string<S>(u) + " outside the universe");
        fi.rows[i].emplace_back(it->second, p);
        sum += p;
      }
      if (sum != 1)
        fail("InvalidDistribution", "kernel row at " + state_to_string<S>(fi.states[i]) +
                                        " sums to " + format_rational(sum));
    }
    for (const auto& [s, p] : chain.initial.support) {
      auto it = fi.index.find(s);
      if (it == fi.index.end())
        fail("StateOutsideUniverse",
             "initial state " + state_to_string<S>(s) + " outside the universe");
      fi.initial.emplace_back(it->second, p);
    }
    return fi;
  }

  std::vector<char> mask(const Region<S>& region) const {
    std::vector<char> m(states.size(), 0);
    for (std::size_t i = 0; i < states.size(); ++i) m[i] = region.member(states[i]) ? 1 : 0;
    return m;
  }
};

// ---------------------------------------------------------------------------
// BSCCs.

template <class S>
struct Bscc {
  std::vector<S> states;          // sorted
  std::vector<char> per_pair;     // pair i satisfied inside this component
  bool accepting = true;          // all pairs satisfied
};

namespace detail {

// All bottom components as index lists, sorted by smallest member.
inline std::vector<std::vector<int>> bottom_component_nodes(const Rows& rows) {
  int count = 0;
  std::vector<int> comp = scc_components(rows, count);
  std::vector<char> bottom = bottom_components(rows, comp, count);
  std::vector<std::vector<int>> nodes(static_cast<std::size_t>(count));
  for (std::size_t v = 0; v < rows.size(); ++v)
    nodes[static_cast<std::size_t>(comp[v])].push_back(static_cast<int>(v));
  std::vector<std::vector<int>> out;
  for (int c = 0; c < count; ++c)
    if (bottom[static_cast<std::size_t>(c)]) out.push_back(std::move(nodes[static_cast<std::size_t>(c)]));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace detail

template <class S>
std::vector<Bscc<S>> bsccs_of_index(const FiniteIndex<S>& fi, const StreettCondition<S>& cond,
                                    bool reachable_only = true) {
  std::vector<char> keep(fi.states.size(), 1);
  if (reachable_only) {
    std::vector<int> starts;
    for (const auto& [i, p] : fi.initial) starts.push_back(i);
    keep = detail::forward_reachable(fi.rows, starts);
  }
  std::vector<Bscc<S>> out;
  for (const auto& nodes : detail::bottom_component_nodes(fi.rows)) {
    if (!keep[nodes.front()]) continue;
    Bscc<S> b;
    for (int v : nodes) b.states.push_back(fi.states[static_cast<std::size_t>(v)]);
    std::sort(b.states.begin(), b.states.end());
    for (const auto& pair : cond.pairs) {
      bool meets_fin = false, meets_inf = false;
      for (const S& s : b.states) {
        meets_fin = meets_fin || pair.fin.member(s);
        meets_inf = meets_inf || pair.inf.member(s);
      }
      // Inside a bottom component every state is visited infinitely often, so
      // the pair holds iff fin is absent or inf is present.
      const bool ok = !meets_fin || meets_inf;
      b.per_pair.push_back(ok ? 1 : 0);
      b.accepting = b.accepting && ok;
    }
    out.push_back(std::move(b));
  }
  return out;
}

// Bottom strongly connected components of the reachable graph, with one
// acceptance flag per Streett pair.
template <class S>
std::vector<Bscc<S>> bsccs(const MarkovChain<S>& chain, const StreettCondition<S>& cond) {
  return bsccs_of_index(FiniteIndex<S>::build(chain), cond, true);
}

// ---------------------------------------------------------------------------
// Reachability and return probabilities.

template <class S>
ProbabilityVector<S> per_state_reach(const MarkovChain<S>& chain, const Region<S>& target) {
  FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  std::vector<Rational> h = detail::hitting_vector(fi.rows, fi.mask(target));
  ProbabilityVector<S> out;
  for (std::size_t i = 0; i < fi.states.size(); ++i) out.emplace(fi.states[i], h[i]);
  return out;
}

template <class S>
Probability reach_probability(const MarkovChain<S>& chain, const Region<S>& target,
                              const std::optional<Distribution<S>>& from = std::nullopt) {
  FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  std::vector<Rational> h = detail::hitting_vector(fi.rows, fi.mask(target));
  const Distribution<S>& mu = from ? *from : chain.initial;
  Rational acc(0);
  for (const auto& [s, p] : mu.support) {
    auto it = fi.index.find(s);
    if (it == fi.index.end())
      fail("StateOutsideUniverse", "state " + state_to_string<S>(s) + " outside the universe");
    acc += p * h[static_cast<std::size_t>(it->second)];
  }
  return acc;
}

// P(sigma_target < inf) from s: one step, then hit.
template <class S>
Probability return_probability(const MarkovChain<S>& chain, const Region<S>& target, const S& s) {
  FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  std::vector<Rational> h = detail::hitting_vector(fi.rows, fi.mask(target));
  auto it = fi.index.find(s);
  if (it == fi.index.end())
    fail("StateOutsideUniverse", "state " + state_to_string<S>(s) + " outside the universe");
  Rational acc(0);
  for (const auto& [to, p] : fi.rows[static_cast<std::size_t>(it->second)]) acc += p * h[to];
  return acc;
}

// ---------------------------------------------------------------------------
// Streett acceptance probabilities.

namespace detail {

template <class S>
std::vector<Rational> accepting_hit_vector(const FiniteIndex<S>& fi,
                                           const StreettCondition<S>& cond) {
  // Acceptance happens exactly on runs absorbed into an accepting bottom
  // component, so the acceptance probability is the probability of hitting
  // their union.  One BSCC pass and one linear solve serve every state.
  std::vector<char> target(fi.states.size(), 0);
  for (const auto& b : bsccs_of_index(fi, cond, false)) {
    if (!b.accepting) continue;
    for (const S& s : b.states) {
      auto it = fi.index.find(s);
      target[static_cast<std::size_t>(it->second)] = 1;
    }
  }
  return hitting_vector(fi.rows, target);
}

}  // namespace detail

template <class S>
ProbabilityVector<S> per_state_streett(const MarkovChain<S>& chain,
                                       const StreettCondition<S>& cond) {
  FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  std::vector<Rational> h = detail::accepting_hit_vector(fi, cond);
  ProbabilityVector<S> out;
  for (std::size_t i = 0; i < fi.states.size(); ++i) out.emplace(fi.states[i], h[i]);
  return out;
}

template <class S>
Probability streett_probability(const MarkovChain<S>& chain, const StreettCondition<S>& cond,
                                const std::optional<Distribution<S>>& from = std::nullopt) {
  FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  std::vector<Rational> h = detail::accepting_hit_vector(fi, cond);
  const Distribution<S>& mu = from ? *from : chain.initial;
  Rational acc(0);
  for (const auto& [s, p] : mu.support) {
    auto it = fi.index.find(s);
    if (it == fi.index.end())
      fail("StateOutsideUniverse", "state " + state_to_string<S>(s) + " outside the universe");
    acc += p * h[static_cast<std::size_t>(it->second)];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Positive-return test: inf over s in A of P(sigma_B < inf) from s.  A
// positive infimum forces Fin(A) or Inf(B) almost surely.

struct OreyResult {
  bool holds = false;
  Probability infimum = Rational(0);
};

template <class S>
OreyResult check_orey(const MarkovChain<S>& chain, const Region<S>& a, const Region<S>& b) {
  FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  std::vector<Rational> h = detail::hitting_vector(fi.rows, fi.mask(b));
  std::vector<char> am = fi.mask(a);
  bool any = false;
  Rational inf(1);
  for (std::size_t i = 0; i < fi.states.size(); ++i) {
    if (!am[i]) continue;
    any = true;
    Rational ret(0);
    for (const auto& [to, p] : fi.rows[i]) ret += p * h[to];
    if (ret < inf) inf = ret;
  }
  if (!any) return {true, Rational(1)};  // empty A: vacuously finite visits
  return {inf > 0, inf};
}

}  // namespace streett
