#pragma once
// Countable-state Markov chains with exact rational transition probabilities.
// A chain is an initial distribution plus a one-step kernel.  The universe is
// either an explicit finite state list or left implicit for generated
// families; regions are predicates with an optional finite enumeration.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "streett/rational.hpp"

namespace streett {

// ---------------------------------------------------------------------------
// State formatting.  States are value types with operator< ; the codec turns
// them into the strings used in files, reports and error messages.

template <class S>
std::string state_to_string(const S& s);

template <class S>
S state_from_string(const std::string& text);

template <>
inline std::string state_to_string<std::string>(const std::string& s) { return s; }

template <>
inline std::string state_to_string<std::int64_t>(const std::int64_t& s) {
  return std::to_string(s);
}

template <>
inline std::string state_from_string<std::string>(const std::string& text) { return text; }

template <>
inline std::int64_t state_from_string<std::int64_t>(const std::string& text) {
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    fail("ValidationError", "not an integer state: '" + text + "'");
  }
  if (pos != text.size())
    fail("ValidationError", "not an integer state: '" + text + "'");
  return v;
}

// Product states serialize as "<state>|<automaton state>".
template <class S>
using ProductState = std::pair<S, std::string>;

template <class S>
std::string product_state_to_string(const ProductState<S>& s) {
  return state_to_string<S>(s.first) + "|" + s.second;
}

template <class S>
ProductState<S> product_state_from_string(const std::string& text) {
  auto cut = text.rfind('|');
  if (cut == std::string::npos)
    fail("ValidationError", "not a product state: '" + text + "'");
  return {state_from_string<S>(text.substr(0, cut)), text.substr(cut + 1)};
}

template <>
inline std::string state_to_string<ProductState<std::string>>(const ProductState<std::string>& s) {
  return product_state_to_string<std::string>(s);
}

template <>
inline std::string state_to_string<ProductState<std::int64_t>>(const ProductState<std::int64_t>& s) {
  return product_state_to_string<std::int64_t>(s);
}

template <>
inline ProductState<std::string> state_from_string<ProductState<std::string>>(const std::string& t) {
  return product_state_from_string<std::string>(t);
}

template <>
inline ProductState<std::int64_t> state_from_string<ProductState<std::int64_t>>(const std::string& t) {
  return product_state_from_string<std::int64_t>(t);
}

// ---------------------------------------------------------------------------
// Distributions.

template <class S>
struct Distribution {
  // Sorted by state; states unique; probabilities positive and summing to 1.
  std::vector<std::pair<S, Probability>> support;
};

template <class S>
Distribution<S> make_distribution(std::vector<std::pair<S, Rational>> entries) {
  if (entries.empty()) fail("InvalidDistribution", "empty support");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Rational sum(0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && !(entries[i - 1].first < entries[i].first))
      fail("InvalidDistribution",
           "duplicate state " + state_to_string<S>(entries[i].first));
    if (entries[i].second <= 0)
      fail("InvalidDistribution",
           "non-positive mass at " + state_to_string<S>(entries[i].first));
    sum += entries[i].second;
  }
  if (sum != 1)
    fail("InvalidDistribution", "mass sums to " + format_rational(sum));
  Distribution<S> d;
  d.support = std::move(entries);
  return d;
}

template <class S>
Distribution<S> dirac(const S& s) {
  Distribution<S> d;
  d.support.emplace_back(s, Rational(1));
  return d;
}

template <class S, class F>
Rational expectation(const Distribution<S>& d, F&& value) {
  Rational acc(0);
  for (const auto& [s, p] : d.support) acc += p * value(s);
  return acc;
}

// One-step mass assigned to states satisfying `pred`.
template <class S, class F>
Probability mass_where(const Distribution<S>& d, F&& pred) {
  Rational acc(0);
  for (const auto& [s, p] : d.support)
    if (pred(s)) acc += p;
  return acc;
}

template <class S>
using Kernel = std::function<Distribution<S>(const S&)>;

template <class S>
using LabelingFunction = std::function<std::set<std::string>(const S&)>;

// ---------------------------------------------------------------------------
// Regions.

template <class S>
struct Region {
  std::string name;
  std::function<bool(const S&)> member;
  std::optional<std::vector<S>> states;  // sorted enumeration when known
};

template <class S>
Region<S> region_from_states(std::string name, std::vector<S> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  Region<S> r;
  r.name = std::move(name);
  auto shared = std::make_shared<std::vector<S>>(states);
  r.member = [shared](const S& s) {
    return std::binary_search(shared->begin(), shared->end(), s);
  };
  r.states = std::move(states);
  return r;
}

template <class S>
Region<S> region_all() {
  return {"all", [](const S&) { return true; }, std::nullopt};
}

template <class S>
Region<S> region_empty() {
  return {"empty", [](const S&) { return false; }, std::vector<S>{}};
}

template <class S>
Region<S> region_from_predicate(std::string name, std::function<bool(const S&)> member) {
  return {std::move(name), std::move(member), std::nullopt};
}

template <class S>
Region<S> region_union(const Region<S>& a, const Region<S>& b) {
  Region<S> r;
  r.name = a.name + "|" + b.name;
  auto am = a.member, bm = b.member;
  r.member = [am, bm](const S& s) { return am(s) || bm(s); };
  if (a.states && b.states) {
    std::vector<S> merged(*a.states);
    merged.insert(merged.end(), b.states->begin(), b.states->end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    r.states = std::move(merged);
  }
  return r;
}

template <class S>
Region<S> region_complement(const Region<S>& a) {
  Region<S> r;
  r.name = "!" + a.name;
  auto am = a.member;
  r.member = [am](const S& s) { return !am(s); };
  return r;
}

// ---------------------------------------------------------------------------
// Streett conditions: pair i is satisfied by a run that visits `fin` finitely
// often or `inf` infinitely often.

template <class S>
struct StreettPair {
  Region<S> fin;
  Region<S> inf;
};

template <class S>
struct StreettCondition {
  std::vector<StreettPair<S>> pairs;
};

// ---------------------------------------------------------------------------
// Chains and models.

template <class S>
struct MarkovChain {
  Distribution<S> initial;
  Kernel<S> kernel;
  std::optional<std::vector<S>> universe;  // sorted; absent for generated chains
  LabelingFunction<S> labels;              // empty function when unlabeled
  std::string family;                      // generator descriptor, "" if explicit
};

template <class S>
struct Model {
  using state_type = S;
  MarkovChain<S> chain;
  std::map<std::string, Region<S>> regions;
  StreettCondition<S> streett;
  std::map<std::string, Rational> params;  // family parameters, if generated
};

template <class S>
bool is_finite(const MarkovChain<S>& chain) {
  return chain.universe.has_value();
}

template <class S>
const std::vector<S>& universe_of(const MarkovChain<S>& chain) {
  if (!chain.universe)
    fail("UnboundedEnumeration",
         "operation requires a finite universe (chain family '" + chain.family + "')");
  return *chain.universe;
}

// Enumerates region members: the stored enumeration if present, otherwise the
// universe filtered by the predicate.
template <class S>
std::vector<S> enumerate_region(const MarkovChain<S>& chain, const Region<S>& region) {
  if (region.states) return *region.states;
  std::vector<S> out;
  for (const S& s : universe_of(chain))
    if (region.member(s)) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Verification windows.  Absent state list means the entire finite universe.

template <class S>
struct Window {
  std::optional<std::vector<S>> states;
};

template <class S>
Window<S> window_whole() {
  return {};
}

template <class S>
Window<S> window_from_states(std::vector<S> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return {std::move(states)};
}

inline Window<std::int64_t> window_range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) fail("ValidationError", "empty window range");
  std::vector<std::int64_t> states;
  states.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t s = lo; s <= hi; ++s) states.push_back(s);
  return {std::move(states)};
}

template <class S>
std::vector<S> window_list(const MarkovChain<S>& chain, const Window<S>& window) {
  if (window.states) return *window.states;
  return universe_of(chain);
}

// True when every universe state is inside the window, so a windowed pass is
// an unconditional pass.
template <class S>
bool window_covers_universe(const MarkovChain<S>& chain, const Window<S>& window) {
  if (!window.states) return is_finite(chain);
  if (!is_finite(chain)) return false;
  const auto& u = *chain.universe;
  return std::includes(window.states->begin(), window.states->end(), u.begin(), u.end());
}

}  // namespace streett
