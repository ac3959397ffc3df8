#pragma once
// Constructive region and certificate synthesis on finite chains: absorbing
// regions from return probabilities, invariants from per-state acceptance
// probabilities, and completeness witnesses whose checker verdicts are
// guaranteed by construction.
//
// All operations here require a finite universe; per-state probabilities are
// computed once through the exact oracle and shared.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "streett/certificates.hpp"
#include "streett/oracle.hpp"

namespace streett {

// J = {s in I minus A : P(sigma_A < infinity from s) <= threshold}.  Any
// threshold in (0,1) yields a region satisfying the escape condition.
template <class S>
Region<S> synthesize_absorbing(const MarkovChain<S>& chain, const Region<S>& invariant,
                               const Region<S>& avoid, const Rational& threshold = Rational(1, 2),
                               const std::string& name = "J") {
  if (!(threshold > 0 && threshold < 1))
    fail("BadParameter", "threshold must lie in (0,1), got " + format_rational(threshold));
  const FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  const std::vector<Rational> to_avoid = detail::hitting_vector(fi.rows, fi.mask(avoid));
  std::vector<S> selected;
  for (std::size_t k = 0; k < fi.states.size(); ++k) {
    const S& s = fi.states[k];
    if (!invariant.member(s) || avoid.member(s)) continue;
    Rational ret(0);
    for (const auto& [to, p] : fi.rows[k]) ret += p * to_avoid[static_cast<std::size_t>(to)];
    if (ret <= threshold) selected.push_back(s);
  }
  return region_from_states<S>(name, selected);
}

// I_k = {s : P(acceptance from s) >= 1/(k+1)}.
template <class S>
Region<S> synthesize_invariant(const MarkovChain<S>& chain, const StreettCondition<S>& cond,
                               std::uint64_t k) {
  const ProbabilityVector<S> per_state = per_state_streett(chain, cond);
  const Rational cutoff(1, static_cast<unsigned long>(k) + 1);
  std::vector<S> selected;
  for (const auto& [s, p] : per_state)
    if (p >= cutoff) selected.push_back(s);
  return region_from_states<S>("I" + std::to_string(k), selected);
}

// I = {s : P(acceptance from s) = 1}.  When the chain accepts almost surely
// this is an almost-sure invariant; otherwise *almost_sure reports false and
// the region is still returned.
template <class S>
Region<S> synthesize_as_invariant(const MarkovChain<S>& chain, const StreettCondition<S>& cond,
                                  bool* almost_sure = nullptr) {
  const ProbabilityVector<S> per_state = per_state_streett(chain, cond);
  std::vector<S> selected;
  for (const auto& [s, p] : per_state)
    if (p == 1) selected.push_back(s);
  if (almost_sure) {
    *almost_sure = true;
    for (const auto& [s, p] : chain.initial.support) {
      const auto it = per_state.find(s);
      if (it == per_state.end() || it->second != 1) *almost_sure = false;
    }
  }
  return region_from_states<S>("I", selected);
}

// The distinct thresholds at which I_k can change: for each per-state value
// v in (0,1], the least k with 1/(k+1) <= v.
template <class S>
std::vector<std::uint64_t> invariant_thresholds(const MarkovChain<S>& chain,
                                                const StreettCondition<S>& cond) {
  const ProbabilityVector<S> per_state = per_state_streett(chain, cond);
  std::vector<std::uint64_t> ks;
  for (const auto& [s, v] : per_state) {
    if (!(v > 0)) continue;
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v.get_den_mpz_t(), v.get_num_mpz_t());
    ks.push_back(q == 0 ? 0 : static_cast<std::uint64_t>(q.get_ui()) - 1);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

// V(s) = P(tau into the complement of X < infinity); the exact completeness
// witness for quantitative safety: mu V = 1 - P(stay in X forever).
template <class S>
ValueFunction<S> witness_quant_safety(const MarkovChain<S>& chain, const Region<S>& x) {
  const FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  const std::vector<Rational> h = detail::hitting_vector(fi.rows, fi.mask(region_complement(x)));
  std::map<S, Rational> table;
  for (std::size_t k = 0; k < fi.states.size(); ++k) table[fi.states[k]] = h[k];
  return table_value_function<S>("quant-witness(" + x.name + ")", std::move(table));
}

// V(s) = P(tau_A < infinity); the completeness witness for qualitative
// safety, equal to 1 on A and harmonic elsewhere.
template <class S>
ValueFunction<S> witness_qual_safety(const MarkovChain<S>& chain, const Region<S>& a) {
  const FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  const std::vector<Rational> h = detail::hitting_vector(fi.rows, fi.mask(a));
  std::map<S, Rational> table;
  for (std::size_t k = 0; k < fi.states.size(); ++k) table[fi.states[k]] = h[k];
  return table_value_function<S>("qual-witness(" + a.name + ")", std::move(table));
}

// W(s) = E[tau into target]; requires almost-sure hitting from every state.
template <class S>
ValueFunction<S> expected_hitting_value(const MarkovChain<S>& chain, const Region<S>& target,
                                        const std::string& name = "expected-steps") {
  const FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  const std::vector<Rational> e = detail::expected_steps_vector(fi.rows, fi.mask(target));
  std::map<S, Rational> table;
  for (std::size_t k = 0; k < fi.states.size(); ++k) table[fi.states[k]] = e[k];
  return table_value_function<S>(name, std::move(table));
}

// U(s) = graph distance to the target along positive-probability edges.
template <class S>
RankingFunction<S> distance_ranking(const MarkovChain<S>& chain, const Region<S>& target,
                                    const std::string& name = "distance") {
  const FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  const std::vector<std::uint64_t> d = detail::bfs_distance_vector(fi.rows, fi.mask(target));
  std::map<S, std::uint64_t> table;
  for (std::size_t k = 0; k < fi.states.size(); ++k) table[fi.states[k]] = d[k];
  return table_ranking_function<S>(name, std::move(table));
}

// Absorbing-region decomposition with I the almost-sure invariant.
template <class S>
DecompositionWitness<S> synthesize_decomposition(const MarkovChain<S>& chain,
                                                 const StreettCondition<S>& cond,
                                                 const Rational& threshold = Rational(1, 2)) {
  DecompositionWitness<S> w;
  w.invariant = synthesize_as_invariant(chain, cond);
  for (std::size_t i = 0; i < cond.pairs.size(); ++i)
    w.absorbing.push_back(synthesize_absorbing(chain, w.invariant, cond.pairs[i].fin, threshold,
                                               "J" + std::to_string(i + 1)));
  return w;
}

// Same with I = I_k from the epsilon-completeness construction.
template <class S>
DecompositionWitness<S> synthesize_decomposition_k(const MarkovChain<S>& chain,
                                                   const StreettCondition<S>& cond,
                                                   std::uint64_t k,
                                                   const Rational& threshold = Rational(1, 2)) {
  DecompositionWitness<S> w;
  w.invariant = synthesize_invariant(chain, cond, k);
  for (std::size_t i = 0; i < cond.pairs.size(); ++i)
    w.absorbing.push_back(synthesize_absorbing(chain, w.invariant, cond.pairs[i].fin, threshold,
                                               "J" + std::to_string(i + 1)));
  return w;
}

namespace detail {

// Pieces shared by the two rule-bundle synthesizers: the recurrence target
// T_i = B_i or J_i or outside I, its expected hitting time and distance, and
// the one-step probability of decreasing the expectation by one.
template <class S>
struct RuleCore {
  Region<S> target;
  std::map<S, Rational> w_table;
  std::map<S, std::uint64_t> u_table;
  Rational min_decrease_mass{1};  // over active states; 1 when none exist
};

template <class S>
RuleCore<S> rule_core(const FiniteIndex<S>& fi, const Region<S>& invariant, const Region<S>& b,
                      const Region<S>& j, std::size_t pair_no) {
  RuleCore<S> core;
  std::vector<S> target_states;
  for (const S& s : fi.states)
    if (b.member(s) || j.member(s) || !invariant.member(s)) target_states.push_back(s);
  core.target = region_from_states<S>("T" + std::to_string(pair_no), target_states);
  const std::vector<char> mask = fi.mask(core.target);
  const std::vector<Rational> w = expected_steps_vector(fi.rows, mask);
  const std::vector<std::uint64_t> u = bfs_distance_vector(fi.rows, mask);
  for (std::size_t k = 0; k < fi.states.size(); ++k) {
    core.w_table[fi.states[k]] = w[k];
    core.u_table[fi.states[k]] = u[k];
  }
  bool any_active = false;
  for (std::size_t k = 0; k < fi.states.size(); ++k) {
    if (mask[k] || !invariant.member(fi.states[k])) continue;
    // W(s) = 1 + sum P(s,u) W(u), so some successor drops by at least 1.
    Rational mass(0);
    const Rational cap = w[k] - 1;
    for (const auto& [to, p] : fi.rows[k])
      if (w[static_cast<std::size_t>(to)] <= cap) mass += p;
    if (!any_active || mass < core.min_decrease_mass) core.min_decrease_mass = mass;
    any_active = true;
  }
  return core;
}

}  // namespace detail

// Complete Rule #1 bundle for a finite chain: decomposition witness, exact
// hitting-probability value functions, expected-hitting-time supermartingales
// and distance rankings.  Requires the chain to accept almost surely from
// within the synthesized invariant (guaranteed when the decomposition checks
// out; NotAlmostSure otherwise).
template <class S>
Rule1Bundle<S> synthesize_rule1_bundle(const MarkovChain<S>& chain,
                                       const StreettCondition<S>& cond,
                                       const Rational& threshold = Rational(1, 2)) {
  const FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  Rule1Bundle<S> bundle;
  bundle.witness = synthesize_decomposition(chain, cond, threshold);
  bundle.v0 = witness_quant_safety(chain, bundle.witness.invariant);
  for (std::size_t i = 0; i < cond.pairs.size(); ++i) {
    Rule1Pair<S> pair;
    pair.v = witness_qual_safety(chain, cond.pairs[i].fin);
    detail::RuleCore<S> core = detail::rule_core(fi, bundle.witness.invariant, cond.pairs[i].inf,
                                                 bundle.witness.absorbing[i], i + 1);
    pair.w = table_value_function<S>("W" + std::to_string(i + 1), std::move(core.w_table));
    pair.u = table_ranking_function<S>("U" + std::to_string(i + 1), std::move(core.u_table));
    bundle.pairs.push_back(std::move(pair));
  }
  return bundle;
}

// Complete Rule #2 bundle: same value functions, constant decrease 1 and
// constant decrease probability equal to the worst one-step mass that drops
// the expected hitting time by one.
template <class S>
Rule2Bundle<S> synthesize_rule2_bundle(const MarkovChain<S>& chain,
                                       const StreettCondition<S>& cond,
                                       const Rational& threshold = Rational(1, 2)) {
  const FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  Rule2Bundle<S> bundle;
  bundle.witness = synthesize_decomposition(chain, cond, threshold);
  bundle.v0 = witness_quant_safety(chain, bundle.witness.invariant);
  for (std::size_t i = 0; i < cond.pairs.size(); ++i) {
    Rule2Pair<S> pair;
    pair.v = witness_qual_safety(chain, cond.pairs[i].fin);
    detail::RuleCore<S> core = detail::rule_core(fi, bundle.witness.invariant, cond.pairs[i].inf,
                                                 bundle.witness.absorbing[i], i + 1);
    pair.w = table_value_function<S>("W" + std::to_string(i + 1), std::move(core.w_table));
    pair.d = constant_scalar("d" + std::to_string(i + 1), Rational(1));
    const Rational p_const =
        core.min_decrease_mass > 0 ? core.min_decrease_mass : Rational(1);
    pair.p = constant_scalar("p" + std::to_string(i + 1), p_const);
    bundle.pairs.push_back(std::move(pair));
  }
  return bundle;
}

}  // namespace streett
