#pragma once
// Deterministic Streett automata and the synchronous product with a labelled
// chain.  The automaton reads the label set of the source state on every
// transition; the initial automaton state consumes no letter.  Lifted pairs
// are (S x F_i, S x G_i), so the product reduces an omega-regular property to
// a Streett condition on pair states.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "streett/chain.hpp"

namespace streett {

struct Dsa {
  std::vector<std::string> states;
  std::string initial;
  std::vector<std::string> alphabet;  // atomic propositions
  // (state, canonical letter key) -> successor state
  std::map<std::pair<std::string, std::string>, std::string> transitions;
  // (F_i, G_i): visit F_i finitely often or G_i infinitely often
  std::vector<std::pair<std::set<std::string>, std::set<std::string>>> acceptance;
};

// Canonical key of a letter (a set of propositions): comma-joined sorted list.
inline std::string letter_key(const std::set<std::string>& letter) {
  std::string key;
  for (const auto& p : letter) {
    if (!key.empty()) key += ',';
    key += p;
  }
  return key;
}

inline void validate_dsa(const Dsa& dsa) {
  if (dsa.states.empty()) fail("ValidationError", "automaton needs at least one state");
  std::set<std::string> qs(dsa.states.begin(), dsa.states.end());
  if (qs.size() != dsa.states.size()) fail("ValidationError", "duplicate automaton state");
  if (!qs.count(dsa.initial))
    fail("ValidationError", "unknown initial automaton state '" + dsa.initial + "'");
  std::set<std::string> props(dsa.alphabet.begin(), dsa.alphabet.end());
  if (props.size() != dsa.alphabet.size()) fail("ValidationError", "duplicate proposition");
  if (props.size() > 10)
    fail("ValidationError", "alphabet too large to validate transition totality");
  for (const auto& [key, to] : dsa.transitions) {
    if (!qs.count(key.first))
      fail("ValidationError", "transition from unknown state '" + key.first + "'");
    if (!qs.count(to)) fail("ValidationError", "transition to unknown state '" + to + "'");
  }
  for (const auto& [f, g] : dsa.acceptance) {
    for (const auto& q : f)
      if (!qs.count(q)) fail("ValidationError", "acceptance F references unknown state '" + q + "'");
    for (const auto& q : g)
      if (!qs.count(q)) fail("ValidationError", "acceptance G references unknown state '" + q + "'");
  }
  // Totality over every subset of the alphabet.
  const std::vector<std::string> sorted_props(props.begin(), props.end());
  const std::size_t n = sorted_props.size();
  for (const auto& q : dsa.states) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      std::set<std::string> letter;
      for (std::size_t i = 0; i < n; ++i)
        if (bits & (std::size_t{1} << i)) letter.insert(sorted_props[i]);
      if (!dsa.transitions.count({q, letter_key(letter)}))
        fail("ValidationError",
             "missing transition from '" + q + "' on letter {" + letter_key(letter) + "}");
    }
  }
}

inline const std::string& dsa_step(const Dsa& dsa, const std::string& q,
                                   const std::set<std::string>& letter) {
  for (const auto& p : letter)
    if (std::find(dsa.alphabet.begin(), dsa.alphabet.end(), p) == dsa.alphabet.end())
      fail("LabelOutsideAlphabet", "proposition '" + p + "' not in the automaton alphabet");
  auto it = dsa.transitions.find({q, letter_key(letter)});
  if (it == dsa.transitions.end())
    fail("ValidationError", "missing transition from '" + q + "' on {" + letter_key(letter) + "}");
  return it->second;
}

// Run on a finite word; output has one more state than there are letters.
inline std::vector<std::string> dsa_run(const Dsa& dsa,
                                        const std::vector<std::set<std::string>>& letters) {
  std::vector<std::string> run{dsa.initial};
  for (const auto& letter : letters) run.push_back(dsa_step(dsa, run.back(), letter));
  return run;
}

// Acceptance of the ultimately-periodic word stem loop^omega.  The loop is
// unrolled until the automaton state at the loop boundary recurs (pigeonhole
// within |Q|+1 unrollings); the states seen between the two occurrences are
// exactly those visited infinitely often.
inline bool dsa_accepts_lasso(const Dsa& dsa, const std::vector<std::set<std::string>>& stem,
                              const std::vector<std::set<std::string>>& loop) {
  if (loop.empty()) fail("ValidationError", "lasso loop must be non-empty");
  std::string q = dsa_run(dsa, stem).back();
  std::vector<std::string> boundary{q};
  std::vector<std::vector<std::string>> visited_per_pass;
  for (;;) {
    std::vector<std::string> pass;
    for (const auto& letter : loop) {
      q = dsa_step(dsa, q, letter);
      pass.push_back(q);
    }
    visited_per_pass.push_back(std::move(pass));
    auto prev = std::find(boundary.begin(), boundary.end(), q);
    if (prev != boundary.end()) {
      std::set<std::string> inf;
      for (std::size_t k = static_cast<std::size_t>(prev - boundary.begin());
           k < visited_per_pass.size(); ++k)
        inf.insert(visited_per_pass[k].begin(), visited_per_pass[k].end());
      for (const auto& [f, g] : dsa.acceptance) {
        const bool hits_f = std::any_of(inf.begin(), inf.end(),
                                        [&](const std::string& s) { return f.count(s) > 0; });
        const bool hits_g = std::any_of(inf.begin(), inf.end(),
                                        [&](const std::string& s) { return g.count(s) > 0; });
        if (hits_f && !hits_g) return false;
      }
      return true;
    }
    boundary.push_back(q);
  }
}

template <class S>
struct ProductResult {
  MarkovChain<ProductState<S>> chain;
  StreettCondition<ProductState<S>> cond;
};

// Synchronous composition.  The pair (s, q) moves to (s', T(q, labels(s)))
// with probability P(s, s'); all successors share one automaton target
// because the letter is read off the source.
template <class S>
ProductResult<S> product(const MarkovChain<S>& chain, const Dsa& dsa) {
  validate_dsa(dsa);
  if (!chain.labels) fail("ValidationError", "product requires a labelled chain");
  ProductResult<S> out;
  const auto base_kernel = chain.kernel;
  const auto base_labels = chain.labels;
  const Dsa automaton = dsa;

  std::vector<std::pair<ProductState<S>, Probability>> init;
  for (const auto& [s, p] : chain.initial.support) init.push_back({{s, automaton.initial}, p});
  out.chain.initial = make_distribution<ProductState<S>>(init);
  out.chain.kernel = [base_kernel, base_labels, automaton](const ProductState<S>& sq) {
    const std::string q2 = dsa_step(automaton, sq.second, base_labels(sq.first));
    std::vector<std::pair<ProductState<S>, Probability>> entries;
    for (const auto& [u, p] : base_kernel(sq.first).support) entries.push_back({{u, q2}, p});
    return make_distribution<ProductState<S>>(entries);
  };
  out.chain.labels = [base_labels](const ProductState<S>& sq) { return base_labels(sq.first); };

  // Reachable pair universe, when the base chain is finite.
  if (chain.universe) {
    std::vector<ProductState<S>> frontier;
    std::set<ProductState<S>> seen;
    for (const auto& [s, p] : out.chain.initial.support)
      if (seen.insert(s).second) frontier.push_back(s);
    while (!frontier.empty()) {
      const ProductState<S> sq = frontier.back();
      frontier.pop_back();
      for (const auto& [u, p] : out.chain.kernel(sq).support)
        if (seen.insert(u).second) frontier.push_back(u);
    }
    out.chain.universe = std::vector<ProductState<S>>(seen.begin(), seen.end());
  }

  for (std::size_t i = 0; i < automaton.acceptance.size(); ++i) {
    const auto f = automaton.acceptance[i].first;
    const auto g = automaton.acceptance[i].second;
    Region<ProductState<S>> fin;
    fin.name = "A" + std::to_string(i + 1);
    fin.member = [f](const ProductState<S>& sq) { return f.count(sq.second) > 0; };
    Region<ProductState<S>> inf;
    inf.name = "B" + std::to_string(i + 1);
    inf.member = [g](const ProductState<S>& sq) { return g.count(sq.second) > 0; };
    if (out.chain.universe) {
      std::vector<ProductState<S>> fs, gs;
      for (const auto& sq : *out.chain.universe) {
        if (fin.member(sq)) fs.push_back(sq);
        if (inf.member(sq)) gs.push_back(sq);
      }
      fin = region_from_states<ProductState<S>>(fin.name, fs);
      inf = region_from_states<ProductState<S>>(inf.name, gs);
    }
    out.cond.pairs.push_back({std::move(fin), std::move(inf)});
  }
  return out;
}

}  // namespace streett
