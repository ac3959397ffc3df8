#pragma once
// Certificate bundles and their checkers.
//
// All five checkers share the same shape: walk the verification window, check
// each inequality pointwise with exact rational arithmetic, and record one
// condition entry per inequality.  On finite chains the window defaults to
// the whole universe and a clean run is a Pass; on generated chains the
// caller supplies a finite window and a clean run is only a PassOnWindow.
//
// Comparisons are exact by default.  In approximate mode values still live in
// exact (dyadic) rationals, but inequalities may be accepted within an
// absolute tolerance when the certificate is flagged tight, and strict
// positivity is demanded with a minimum margin.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "streett/oracle.hpp"
#include "streett/report.hpp"

namespace streett {

template <class S>
struct ValueFunction {
  std::string name;
  std::function<Rational(const S&)> value;  // total, non-negative
};

template <class S>
struct RankingFunction {
  std::string name;
  std::function<std::uint64_t(const S&)> value;  // total, natural-valued
};

struct MonotoneScalarFunction {
  std::string name;
  std::function<Rational(const Rational&)> value;
};

template <class S>
struct DecompositionWitness {
  Region<S> invariant;
  std::vector<Region<S>> absorbing;  // one region per Streett pair
};

template <class S>
struct Rule1Pair {
  ValueFunction<S> v;
  ValueFunction<S> w;
  RankingFunction<S> u;
  std::optional<Rational> gamma;  // inferred from v on the absorbing region when absent
};

template <class S>
struct Rule1Bundle {
  DecompositionWitness<S> witness;
  ValueFunction<S> v0;
  std::vector<Rule1Pair<S>> pairs;
};

template <class S>
struct Rule2Pair {
  ValueFunction<S> v;
  ValueFunction<S> w;
  MonotoneScalarFunction d;  // decrease amount, positive
  MonotoneScalarFunction p;  // decrease probability, in (0,1]
  std::optional<Rational> gamma;
};

template <class S>
struct Rule2Bundle {
  DecompositionWitness<S> witness;
  ValueFunction<S> v0;
  std::vector<Rule2Pair<S>> pairs;
};

struct CheckOptions {
  bool exact = true;
  Rational tolerance = Rational(0);   // absolute comparison slack, approximate mode
  bool tight = false;                 // accept near-equality within the slack
  Rational min_margin = Rational(0);  // demanded margin for strict positivity
  std::vector<Rational> r_grid;       // grid for the r-indexed conditions
};

inline CheckOptions approx_check_options(bool tight = false) {
  CheckOptions o;
  o.exact = false;
  o.tight = tight;
  o.tolerance = Rational(1, 1000000000);
  o.min_margin = o.tolerance;
  return o;
}

// ---------------------------------------------------------------------------
// Table-backed evaluators.

template <class S>
ValueFunction<S> table_value_function(std::string name, std::map<S, Rational> table,
                                      std::optional<Rational> fallback = std::nullopt) {
  auto shared = std::make_shared<std::map<S, Rational>>(std::move(table));
  return {std::move(name), [shared, fallback](const S& s) -> Rational {
            auto it = shared->find(s);
            if (it != shared->end()) return it->second;
            if (fallback) return *fallback;
            fail("EvaluationError", "no table value for state " + state_to_string<S>(s));
          }};
}

template <class S>
RankingFunction<S> table_ranking_function(std::string name, std::map<S, std::uint64_t> table,
                                          std::optional<std::uint64_t> fallback = std::nullopt) {
  auto shared = std::make_shared<std::map<S, std::uint64_t>>(std::move(table));
  return {std::move(name), [shared, fallback](const S& s) -> std::uint64_t {
            auto it = shared->find(s);
            if (it != shared->end()) return it->second;
            if (fallback) return *fallback;
            fail("EvaluationError", "no table rank for state " + state_to_string<S>(s));
          }};
}

template <class S>
ValueFunction<S> constant_value(const std::string& name, const Rational& c) {
  if (c < 0) fail("BadParameter", "value functions are non-negative");
  return {name, [c](const S&) { return c; }};
}

inline MonotoneScalarFunction constant_scalar(const std::string& name, const Rational& c) {
  return {name, [c](const Rational&) { return c; }};
}

// ---------------------------------------------------------------------------
// Comparison policy.

namespace detail {

inline bool le_ok(const Rational& lhs, const Rational& rhs, const CheckOptions& o) {
  if (lhs <= rhs) return true;
  return !o.exact && o.tight && lhs - rhs <= o.tolerance;
}

inline bool ge_ok(const Rational& lhs, const Rational& rhs, const CheckOptions& o) {
  return le_ok(rhs, lhs, o);
}

inline bool pos_ok(const Rational& x, const CheckOptions& o) {
  return o.exact ? x > 0 : x >= o.min_margin;
}

inline bool zero_ok(const Rational& x, const CheckOptions& o) {
  return o.exact ? x == 0 : rational_abs(x) <= o.tolerance;
}

template <class S>
Rational one_step_value(const MarkovChain<S>& chain, const std::function<Rational(const S&)>& v,
                        const S& s) {
  return expectation(chain.kernel(s), v);
}

template <class S>
std::string describe_window(const std::vector<S>& wlist, bool whole) {
  if (whole) return "universe (" + std::to_string(wlist.size()) + " states)";
  return "window (" + std::to_string(wlist.size()) + " states: " +
         state_to_string<S>(wlist.front()) + " .. " + state_to_string<S>(wlist.back()) + ")";
}

// Scans sorted states in `domain` where `in_dom` holds; reports the first
// (smallest) state where `violated` fires.
template <class S, class Dom, class Viol>
void scan_condition(ConditionResult<S>& c, const std::vector<S>& states, Dom&& in_dom,
                    Viol&& violated) {
  for (const S& s : states) {
    if (!in_dom(s)) continue;
    Rational lhs, rhs;
    if (violated(s, lhs, rhs)) {
      c.verdict = Verdict::Fail;
      c.witness = s;
      c.lhs = lhs;
      c.rhs = rhs;
      return;
    }
  }
}

template <class S>
void finalize_report(CheckReport<S>& rep, bool covers, std::optional<Rational> bound) {
  rep.verdict = covers ? Verdict::Pass : Verdict::PassOnWindow;
  for (const auto& c : rep.conditions)
    if (c.verdict == Verdict::Fail) rep.verdict = Verdict::Fail;
  if (rep.verdict != Verdict::Fail) rep.bound = std::move(bound);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quantitative safety: P V <= V inside X, V >= 1 outside, giving
// P(stay in X forever) >= 1 - mu V.

template <class S>
CheckReport<S> check_quant_safety(const MarkovChain<S>& chain, const Region<S>& x,
                                  const ValueFunction<S>& v, const Window<S>& window = {},
                                  const CheckOptions& opts = {}) {
  const std::vector<S> wlist = window_list(chain, window);
  const bool covers = window_covers_universe(chain, window);
  CheckReport<S> rep;
  rep.window_desc = detail::describe_window(wlist, covers);

  ConditionResult<S> nonneg{cond::kQuantNonneg};
  detail::scan_condition(nonneg, wlist, [](const S&) { return true; },
                         [&](const S& s, Rational& lhs, Rational& rhs) {
                           lhs = v.value(s);
                           rhs = 0;
                           return lhs < 0;
                         });
  rep.conditions.push_back(std::move(nonneg));

  ConditionResult<S> dec{cond::kQuantDecrease};
  detail::scan_condition(dec, wlist, [&](const S& s) { return x.member(s); },
                         [&](const S& s, Rational& lhs, Rational& rhs) {
                           lhs = detail::one_step_value(chain, v.value, s);
                           rhs = v.value(s);
                           return !detail::le_ok(lhs, rhs, opts);
                         });
  rep.conditions.push_back(std::move(dec));

  ConditionResult<S> barrier{cond::kQuantBarrier};
  detail::scan_condition(barrier, wlist, [&](const S& s) { return !x.member(s); },
                         [&](const S& s, Rational& lhs, Rational& rhs) {
                           lhs = v.value(s);
                           rhs = 1;
                           return !detail::ge_ok(lhs, rhs, opts);
                         });
  rep.conditions.push_back(std::move(barrier));

  Rational mu_v(0);
  for (const auto& [s, p] : chain.initial.support) mu_v += p * v.value(s);
  detail::finalize_report(rep, covers, Rational(1) - mu_v);
  return rep;
}

// ---------------------------------------------------------------------------
// Qualitative safety: P V <= V outside A, V >= 1 on A, and V bounded away
// from 1 on J with margin gamma = 1 - sup_J V.

template <class S>
CheckReport<S> check_qual_safety(const MarkovChain<S>& chain, const Region<S>& a,
                                 const Region<S>& j, const ValueFunction<S>& v,
                                 const Window<S>& window = {}, const CheckOptions& opts = {}) {
  const std::vector<S> wlist = window_list(chain, window);
  const bool covers = window_covers_universe(chain, window);
  for (const S& s : wlist)
    if (a.member(s) && j.member(s))
      fail("DisjointnessViolation",
           "state " + state_to_string<S>(s) + " lies in both the avoided and absorbing regions");

  CheckReport<S> rep;
  rep.window_desc = detail::describe_window(wlist, covers);

  ConditionResult<S> nonneg{cond::kQualNonneg};
  detail::scan_condition(nonneg, wlist, [](const S&) { return true; },
                         [&](const S& s, Rational& lhs, Rational& rhs) {
                           lhs = v.value(s);
                           rhs = 0;
                           return lhs < 0;
                         });
  rep.conditions.push_back(std::move(nonneg));

  ConditionResult<S> dec{cond::kQualDecrease};
  detail::scan_condition(dec, wlist, [&](const S& s) { return !a.member(s); },
                         [&](const S& s, Rational& lhs, Rational& rhs) {
                           lhs = detail::one_step_value(chain, v.value, s);
                           rhs = v.value(s);
                           return !detail::le_ok(lhs, rhs, opts);
                         });
  rep.conditions.push_back(std::move(dec));

  ConditionResult<S> barrier{cond::kQualBarrier};
  detail::scan_condition(barrier, wlist, [&](const S& s) { return a.member(s); },
                         [&](const S& s, Rational& lhs, Rational& rhs) {
                           lhs = v.value(s);
                           rhs = 1;
                           return !detail::ge_ok(lhs, rhs, opts);
                         });
  rep.conditions.push_back(std::move(barrier));

  ConditionResult<S> margin{cond::kQualMargin};
  Rational sup(0);
  std::optional<S> arg;
  for (const S& s : wlist) {
    if (!j.member(s)) continue;
    const Rational val = v.value(s);
    if (!arg || val > sup) {
      sup = val;
      arg = s;
    }
  }
  const Rational gamma = Rational(1) - sup;
  margin.value = gamma;
  if (!detail::pos_ok(gamma, opts)) {
    margin.verdict = Verdict::Fail;
    margin.witness = arg;
    margin.lhs = sup;
    margin.rhs = 1;
    margin.note = "no positive margin below 1";
  }
  rep.conditions.push_back(std::move(margin));

  detail::finalize_report(rep, covers, gamma);
  return rep;
}

// ---------------------------------------------------------------------------
// Semantic absorbing-region check, oracle-backed, finite chains only.
// For every pair i: J_i subset of I minus A_i; sup over J_i of the return
// probability to A_i stays below 1; from every state of I the region
// B_i or J_i or the complement of I is revisited almost surely.  The
// resulting bound is the probability of remaining in I forever.

template <class S>
CheckReport<S> check_decomposition_semantic(const MarkovChain<S>& chain,
                                            const StreettCondition<S>& cond_,
                                            const DecompositionWitness<S>& witness,
                                            const std::optional<Distribution<S>>& from =
                                                std::nullopt) {
  if (witness.absorbing.size() != cond_.pairs.size())
    fail("PairCountMismatch", "expected " + std::to_string(cond_.pairs.size()) +
                                  " absorbing regions, got " +
                                  std::to_string(witness.absorbing.size()));
  const FiniteIndex<S> fi = FiniteIndex<S>::build(chain);
  CheckReport<S> rep;
  rep.window_desc = detail::describe_window(fi.states, true);
  const Region<S>& inv = witness.invariant;
  const std::vector<char> inv_mask = fi.mask(inv);

  for (std::size_t i = 0; i < cond_.pairs.size(); ++i) {
    const Region<S>& a = cond_.pairs[i].fin;
    const Region<S>& b = cond_.pairs[i].inf;
    const Region<S>& j = witness.absorbing[i];
    const int pair_idx = static_cast<int>(i);

    ConditionResult<S> scope{cond::kDecompScope};
    scope.pair_index = pair_idx;
    detail::scan_condition(scope, fi.states, [&](const S& s) { return j.member(s); },
                           [&](const S& s, Rational&, Rational&) {
                             return !inv.member(s) || a.member(s);
                           });
    if (scope.verdict == Verdict::Fail) {
      scope.note = "absorbing region leaves I minus A";
      scope.lhs.reset();
      scope.rhs.reset();
    }
    rep.conditions.push_back(std::move(scope));

    // Return probabilities to A_i, maximized over J_i.
    const std::vector<Rational> to_a = detail::hitting_vector(fi.rows, fi.mask(a));
    ConditionResult<S> escape{cond::kDecompEscape};
    escape.pair_index = pair_idx;
    Rational sup(0);
    std::optional<S> sup_arg;
    for (std::size_t k = 0; k < fi.states.size(); ++k) {
      if (!j.member(fi.states[k])) continue;
      Rational ret(0);
      for (const auto& [to, p] : fi.rows[k]) ret += p * to_a[static_cast<std::size_t>(to)];
      if (!sup_arg || ret > sup) {
        sup = ret;
        sup_arg = fi.states[k];
      }
    }
    escape.value = sup;
    if (sup_arg && sup >= 1) {
      escape.verdict = Verdict::Fail;
      escape.witness = sup_arg;
      escape.lhs = sup;
      escape.rhs = 1;
      escape.note = "return to the avoided region is almost sure";
    }
    rep.conditions.push_back(std::move(escape));

    // Return probabilities to B_i or J_i or outside I, minimized over I.
    std::vector<char> recur_mask(fi.states.size(), 0);
    for (std::size_t k = 0; k < fi.states.size(); ++k) {
      const S& s = fi.states[k];
      recur_mask[k] = (b.member(s) || j.member(s) || !inv.member(s)) ? 1 : 0;
    }
    const std::vector<Rational> to_recur = detail::hitting_vector(fi.rows, recur_mask);
    ConditionResult<S> recur{cond::kDecompRecur};
    recur.pair_index = pair_idx;
    Rational inf(1);
    std::optional<S> inf_arg;
    for (std::size_t k = 0; k < fi.states.size(); ++k) {
      if (!inv_mask[k]) continue;
      Rational ret(0);
      for (const auto& [to, p] : fi.rows[k]) ret += p * to_recur[static_cast<std::size_t>(to)];
      if (!inf_arg || ret < inf) {
        inf = ret;
        inf_arg = fi.states[k];
      }
    }
    recur.value = inf_arg ? inf : Rational(1);
    if (inf_arg && inf != 1) {
      recur.verdict = Verdict::Fail;
      recur.witness = inf_arg;
      recur.lhs = inf;
      recur.rhs = 1;
      recur.note = "revisit is not almost sure";
    }
    rep.conditions.push_back(std::move(recur));
  }

  // P(stay in I forever) from the initial (or supplied) distribution.
  const std::vector<Rational> to_exit =
      detail::hitting_vector(fi.rows, fi.mask(region_complement(inv)));
  const Distribution<S>& mu = from ? *from : chain.initial;
  Rational exit_mass(0);
  for (const auto& [s, p] : mu.support) {
    auto it = fi.index.find(s);
    if (it == fi.index.end())
      fail("StateOutsideUniverse", "state " + state_to_string<S>(s) + " outside the universe");
    exit_mass += p * to_exit[static_cast<std::size_t>(it->second)];
  }
  detail::finalize_report(rep, true, Rational(1) - exit_mass);
  return rep;
}

namespace detail {

// Shared pieces of the two proof rules: the V_i shape conditions and the V_0
// invariance conditions.

template <class S>
void check_v_shape(CheckReport<S>& rep, const MarkovChain<S>& chain, const Region<S>& a,
                   const Region<S>& j, const ValueFunction<S>& v,
                   const std::optional<Rational>& given_gamma, const std::vector<S>& wlist,
                   const CheckOptions& opts, const char* dec_id, const char* barrier_id,
                   const char* margin_id, int pair_idx) {
  ConditionResult<S> dec{dec_id};
  dec.pair_index = pair_idx;
  scan_condition(dec, wlist, [&](const S& s) { return !a.member(s); },
                 [&](const S& s, Rational& lhs, Rational& rhs) {
                   lhs = one_step_value(chain, v.value, s);
                   rhs = v.value(s);
                   return !le_ok(lhs, rhs, opts);
                 });
  rep.conditions.push_back(std::move(dec));

  ConditionResult<S> barrier{barrier_id};
  barrier.pair_index = pair_idx;
  scan_condition(barrier, wlist, [&](const S& s) { return a.member(s); },
                 [&](const S& s, Rational& lhs, Rational& rhs) {
                   lhs = v.value(s);
                   rhs = 1;
                   return !ge_ok(lhs, rhs, opts);
                 });
  rep.conditions.push_back(std::move(barrier));

  ConditionResult<S> margin{margin_id};
  margin.pair_index = pair_idx;
  if (given_gamma) {
    margin.value = *given_gamma;
    if (!pos_ok(*given_gamma, opts)) {
      margin.verdict = Verdict::Fail;
      margin.note = "declared margin is not positive";
    } else {
      const Rational cap = Rational(1) - *given_gamma;
      scan_condition(margin, wlist, [&](const S& s) { return j.member(s); },
                     [&](const S& s, Rational& lhs, Rational& rhs) {
                       lhs = v.value(s);
                       rhs = cap;
                       return !le_ok(lhs, rhs, opts);
                     });
    }
  } else {
    Rational sup(0);
    std::optional<S> arg;
    for (const S& s : wlist) {
      if (!j.member(s)) continue;
      const Rational val = v.value(s);
      if (!arg || val > sup) {
        sup = val;
        arg = s;
      }
    }
    const Rational gamma = Rational(1) - sup;
    margin.value = gamma;
    if (!pos_ok(gamma, opts)) {
      margin.verdict = Verdict::Fail;
      margin.witness = arg;
      margin.lhs = sup;
      margin.rhs = 1;
      margin.note = "no positive margin below 1";
    }
  }
  rep.conditions.push_back(std::move(margin));
}

template <class S>
void check_v0(CheckReport<S>& rep, const MarkovChain<S>& chain, const Region<S>& inv,
              const ValueFunction<S>& v0, const std::vector<S>& wlist, const CheckOptions& opts,
              const char* dec_id, const char* barrier_id) {
  ConditionResult<S> dec{dec_id};
  scan_condition(dec, wlist, [&](const S& s) { return inv.member(s); },
                 [&](const S& s, Rational& lhs, Rational& rhs) {
                   lhs = one_step_value(chain, v0.value, s);
                   rhs = v0.value(s);
                   return !le_ok(lhs, rhs, opts);
                 });
  rep.conditions.push_back(std::move(dec));

  ConditionResult<S> barrier{barrier_id};
  scan_condition(barrier, wlist, [&](const S& s) { return !inv.member(s); },
                 [&](const S& s, Rational& lhs, Rational& rhs) {
                   lhs = v0.value(s);
                   rhs = 1;
                   return !ge_ok(lhs, rhs, opts);
                 });
  rep.conditions.push_back(std::move(barrier));
}

template <class S>
Rational initial_bound(const MarkovChain<S>& chain, const ValueFunction<S>& v0) {
  Rational mu_v(0);
  for (const auto& [s, p] : chain.initial.support) mu_v += p * v0.value(s);
  return Rational(1) - mu_v;
}

template <class S, class F>
void check_nonneg(CheckReport<S>& rep, const std::vector<S>& wlist, const char* id, F&& fns) {
  // fns: state -> vector of (function name, value)
  ConditionResult<S> nn{id};
  for (const S& s : wlist) {
    for (const auto& [name, val] : fns(s)) {
      if (val < 0) {
        nn.verdict = Verdict::Fail;
        nn.witness = s;
        nn.lhs = val;
        nn.rhs = 0;
        nn.note = name;
        break;
      }
    }
    if (nn.verdict == Verdict::Fail) break;
  }
  rep.conditions.push_back(std::move(nn));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Proof rule #1: ranked supermartingales.

template <class S>
CheckReport<S> check_rule1(const MarkovChain<S>& chain, const StreettCondition<S>& cond_,
                           const Rule1Bundle<S>& bundle, const Window<S>& window = {},
                           const CheckOptions& opts = {}) {
  if (bundle.pairs.size() != cond_.pairs.size())
    fail("PairCountMismatch", "expected " + std::to_string(cond_.pairs.size()) +
                                  " certificate pairs, got " + std::to_string(bundle.pairs.size()));
  if (opts.r_grid.empty()) fail("EmptyRGrid", "the r grid must contain at least one value");
  const std::vector<S> wlist = window_list(chain, window);
  const bool covers = window_covers_universe(chain, window);
  const Region<S>& inv = bundle.witness.invariant;
  CheckReport<S> rep;
  rep.window_desc = detail::describe_window(wlist, covers);

  detail::check_nonneg(rep, wlist, cond::kRule1Nonneg, [&](const S& s) {
    std::vector<std::pair<std::string, Rational>> vals;
    vals.emplace_back("V0", bundle.v0.value(s));
    for (std::size_t i = 0; i < bundle.pairs.size(); ++i) {
      vals.emplace_back("V" + std::to_string(i + 1), bundle.pairs[i].v.value(s));
      vals.emplace_back("W" + std::to_string(i + 1), bundle.pairs[i].w.value(s));
    }
    return vals;
  });

  for (std::size_t i = 0; i < cond_.pairs.size(); ++i) {
    const Region<S>& a = cond_.pairs[i].fin;
    const Region<S>& b = cond_.pairs[i].inf;
    const Region<S>& j = bundle.witness.absorbing[i];
    const Rule1Pair<S>& pair = bundle.pairs[i];
    const int pair_idx = static_cast<int>(i);

    ConditionResult<S> scope{cond::kRule1Scope};
    scope.pair_index = pair_idx;
    detail::scan_condition(scope, wlist, [&](const S& s) { return j.member(s); },
                           [&](const S& s, Rational&, Rational&) {
                             return !inv.member(s) || a.member(s);
                           });
    if (scope.verdict == Verdict::Fail) {
      scope.note = "absorbing region leaves I minus A";
      scope.lhs.reset();
      scope.rhs.reset();
    }
    rep.conditions.push_back(std::move(scope));

    detail::check_v_shape(rep, chain, a, j, pair.v, pair.gamma, wlist, opts, cond::kRule1VDecrease,
                          cond::kRule1VBarrier, cond::kRule1VMargin, pair_idx);

    // Active domain of the supermartingale W_i.
    auto in_active = [&](const S& s) {
      return inv.member(s) && !b.member(s) && !j.member(s);
    };

    ConditionResult<S> wdec{cond::kRule1WDecrease};
    wdec.pair_index = pair_idx;
    detail::scan_condition(wdec, wlist, in_active,
                           [&](const S& s, Rational& lhs, Rational& rhs) {
                             lhs = detail::one_step_value(chain, pair.w.value, s);
                             rhs = pair.w.value(s);
                             return !detail::le_ok(lhs, rhs, opts);
                           });
    rep.conditions.push_back(std::move(wdec));

    ConditionResult<S> wpos{cond::kRule1WPositive};
    wpos.pair_index = pair_idx;
    detail::scan_condition(wpos, wlist, in_active,
                           [&](const S& s, Rational& lhs, Rational& rhs) {
                             lhs = pair.w.value(s);
                             rhs = 0;
                             return !detail::pos_ok(lhs, opts);
                           });
    rep.conditions.push_back(std::move(wpos));

    ConditionResult<S> wzero{cond::kRule1WZero};
    wzero.pair_index = pair_idx;
    detail::scan_condition(wzero, wlist,
                           [&](const S& s) { return inv.member(s) && (b.member(s) || j.member(s)); },
                           [&](const S& s, Rational& lhs, Rational& rhs) {
                             rhs = 0;
                             lhs = pair.w.value(s);
                             if (!detail::zero_ok(lhs, opts)) return true;
                             lhs = Rational(static_cast<unsigned long>(pair.u.value(s)));
                             return lhs != 0;
                           });
    if (wzero.verdict == Verdict::Fail) wzero.note = "W and U must vanish on the target";
    rep.conditions.push_back(std::move(wzero));

    // Progress: on every sublevel set {W <= r} of the active domain, the
    // one-step probability of strictly decreasing the rank U stays away
    // from 0.  Verified on the supplied grid joined with the W values
    // realized inside the window.
    ConditionResult<S> progress{cond::kRule1Progress};
    progress.pair_index = pair_idx;
    {
      struct Entry {
        Rational w;
        Rational decrease_mass;
        const S* state;
      };
      std::vector<Entry> active;
      for (const S& s : wlist) {
        if (!in_active(s)) continue;
        const std::uint64_t rank = pair.u.value(s);
        const Rational mass = mass_where(
            chain.kernel(s), [&](const S& u) { return pair.u.value(u) < rank; });
        active.push_back({pair.w.value(s), mass, &s});
      }
      std::sort(active.begin(), active.end(),
                [](const Entry& x, const Entry& y) { return x.w < y.w; });
      std::vector<Rational> grid = opts.r_grid;
      for (const Entry& e : active) grid.push_back(e.w);
      std::sort(grid.begin(), grid.end());
      grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
      // Prefix minima over the active states ordered by W value.
      std::vector<Rational> prefix_min;
      std::vector<const S*> prefix_arg;
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (k == 0 || active[k].decrease_mass < prefix_min.back()) {
          prefix_min.push_back(active[k].decrease_mass);
          prefix_arg.push_back(active[k].state);
        } else {
          prefix_min.push_back(prefix_min.back());
          prefix_arg.push_back(prefix_arg.back());
        }
      }
      for (const Rational& r : grid) {
        if (r < 0) continue;
        // Number of active states with W <= r.
        std::size_t count = 0;
        {
          std::size_t lo = 0, hi = active.size();
          while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (active[mid].w <= r) lo = mid + 1;
            else hi = mid;
          }
          count = lo;
        }
        if (count == 0) {
          progress.per_r.emplace_back(r, std::nullopt);
          continue;
        }
        const Rational eps = prefix_min[count - 1];
        progress.per_r.emplace_back(r, eps);
        if (progress.verdict != Verdict::Fail && !detail::pos_ok(eps, opts)) {
          progress.verdict = Verdict::Fail;
          progress.witness = *prefix_arg[count - 1];
          progress.lhs = eps;
          progress.rhs = 0;
          progress.note = "no decrease probability at r = " + format_rational(r);
        }
      }
      if (progress.verdict != Verdict::Fail && !progress.per_r.empty()) {
        // Binding epsilon: the smallest non-vacuous entry.
        for (auto it = progress.per_r.rbegin(); it != progress.per_r.rend(); ++it)
          if (it->second) {
            progress.value = *it->second;
            break;
          }
      }
    }
    rep.conditions.push_back(std::move(progress));

    // Sublevel boundedness of U holds outright on a finite window; the
    // recorded value is the largest rank reached inside I.
    ConditionResult<S> bounded{cond::kRule1Bounded};
    bounded.pair_index = pair_idx;
    {
      std::uint64_t max_rank = 0;
      for (const S& s : wlist)
        if (inv.member(s)) max_rank = std::max(max_rank, pair.u.value(s));
      bounded.value = Rational(static_cast<unsigned long>(max_rank));
      bounded.note = "finite window";
    }
    rep.conditions.push_back(std::move(bounded));
  }

  detail::check_v0(rep, chain, inv, bundle.v0, wlist, opts, cond::kRule1V0Decrease,
                   cond::kRule1V0Barrier);
  detail::finalize_report(rep, covers, detail::initial_bound(chain, bundle.v0));
  return rep;
}

// ---------------------------------------------------------------------------
// Proof rule #2: fixed-decrease supermartingales.

template <class S>
CheckReport<S> check_rule2(const MarkovChain<S>& chain, const StreettCondition<S>& cond_,
                           const Rule2Bundle<S>& bundle, const Window<S>& window = {},
                           const CheckOptions& opts = {}) {
  if (bundle.pairs.size() != cond_.pairs.size())
    fail("PairCountMismatch", "expected " + std::to_string(cond_.pairs.size()) +
                                  " certificate pairs, got " + std::to_string(bundle.pairs.size()));
  if (opts.r_grid.empty()) fail("EmptyRGrid", "the r grid must contain at least one value");
  const std::vector<S> wlist = window_list(chain, window);
  const bool covers = window_covers_universe(chain, window);
  const Region<S>& inv = bundle.witness.invariant;
  CheckReport<S> rep;
  rep.window_desc = detail::describe_window(wlist, covers);

  detail::check_nonneg(rep, wlist, cond::kRule2Nonneg, [&](const S& s) {
    std::vector<std::pair<std::string, Rational>> vals;
    vals.emplace_back("V0", bundle.v0.value(s));
    for (std::size_t i = 0; i < bundle.pairs.size(); ++i) {
      vals.emplace_back("V" + std::to_string(i + 1), bundle.pairs[i].v.value(s));
      vals.emplace_back("W" + std::to_string(i + 1), bundle.pairs[i].w.value(s));
    }
    return vals;
  });

  for (std::size_t i = 0; i < cond_.pairs.size(); ++i) {
    const Region<S>& a = cond_.pairs[i].fin;
    const Region<S>& b = cond_.pairs[i].inf;
    const Region<S>& j = bundle.witness.absorbing[i];
    const Rule2Pair<S>& pair = bundle.pairs[i];
    const int pair_idx = static_cast<int>(i);

    ConditionResult<S> scope{cond::kRule2Scope};
    scope.pair_index = pair_idx;
    detail::scan_condition(scope, wlist, [&](const S& s) { return j.member(s); },
                           [&](const S& s, Rational&, Rational&) {
                             return !inv.member(s) || a.member(s);
                           });
    if (scope.verdict == Verdict::Fail) {
      scope.note = "absorbing region leaves I minus A";
      scope.lhs.reset();
      scope.rhs.reset();
    }
    rep.conditions.push_back(std::move(scope));

    detail::check_v_shape(rep, chain, a, j, pair.v, pair.gamma, wlist, opts, cond::kRule2VDecrease,
                          cond::kRule2VBarrier, cond::kRule2VMargin, pair_idx);

    auto in_active = [&](const S& s) {
      return inv.member(s) && !b.member(s) && !j.member(s);
    };

    ConditionResult<S> wpos{cond::kRule2WPositive};
    wpos.pair_index = pair_idx;
    detail::scan_condition(wpos, wlist, in_active,
                           [&](const S& s, Rational& lhs, Rational& rhs) {
                             lhs = pair.w.value(s);
                             rhs = 0;
                             return !detail::pos_ok(lhs, opts);
                           });
    rep.conditions.push_back(std::move(wpos));

    ConditionResult<S> wzero{cond::kRule2WZero};
    wzero.pair_index = pair_idx;
    detail::scan_condition(wzero, wlist,
                           [&](const S& s) { return inv.member(s) && (b.member(s) || j.member(s)); },
                           [&](const S& s, Rational& lhs, Rational& rhs) {
                             lhs = pair.w.value(s);
                             rhs = 0;
                             return !detail::zero_ok(lhs, opts);
                           });
    rep.conditions.push_back(std::move(wzero));

    ConditionResult<S> wdec{cond::kRule2WDecrease};
    wdec.pair_index = pair_idx;
    detail::scan_condition(wdec, wlist, in_active,
                           [&](const S& s, Rational& lhs, Rational& rhs) {
                             lhs = detail::one_step_value(chain, pair.w.value, s);
                             rhs = pair.w.value(s);
                             return !detail::le_ok(lhs, rhs, opts);
                           });
    rep.conditions.push_back(std::move(wdec));

    // Drift: at every active state with r = W(s) > 0, one step reaches
    // {W <= r - d(r)} with probability at least p(r).
    ConditionResult<S> drift{cond::kRule2Drift};
    drift.pair_index = pair_idx;
    ConditionResult<S> range{cond::kRule2ScalarRange};
    range.pair_index = pair_idx;
    for (const S& s : wlist) {
      if (!in_active(s)) continue;
      const Rational r = pair.w.value(s);
      if (!(r > 0)) continue;  // nonpositive W on the active domain is a positivity failure
      const Rational dr = pair.d.value(r);
      const Rational pr = pair.p.value(r);
      if (!(dr > 0 && pr > 0 && pr <= 1)) {
        if (range.verdict != Verdict::Fail) {
          range.verdict = Verdict::Fail;
          range.witness = s;
          range.lhs = dr > 0 ? pr : dr;
          range.rhs = dr > 0 ? 1 : 0;
          range.note = dr > 0 ? "p(r) outside (0,1] at r = " + format_rational(r)
                              : "d(r) not positive at r = " + format_rational(r);
        }
        continue;
      }
      if (drift.verdict == Verdict::Fail) continue;
      const Rational cap = r - dr;
      const Rational mass = mass_where(chain.kernel(s), [&](const S& u) {
        return detail::le_ok(pair.w.value(u), cap, opts);
      });
      if (!detail::ge_ok(mass, pr, opts)) {
        drift.verdict = Verdict::Fail;
        drift.witness = s;
        drift.lhs = mass;
        drift.rhs = pr;
        drift.note = "insufficient decrease probability at r = " + format_rational(r);
      }
    }
    rep.conditions.push_back(std::move(range));
    rep.conditions.push_back(std::move(drift));

    // Antitonicity of p and d over the supplied grid, adjacent pairs of the
    // sorted positive values.
    std::vector<Rational> grid;
    for (const Rational& r : opts.r_grid)
      if (r > 0) grid.push_back(r);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto antitone = [&](const MonotoneScalarFunction& f, const char* id) {
      ConditionResult<S> c{id};
      c.pair_index = pair_idx;
      for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const Rational f1 = f.value(grid[k]);
        const Rational f2 = f.value(grid[k + 1]);
        if (!detail::ge_ok(f1, f2, opts)) {
          c.verdict = Verdict::Fail;
          c.lhs = f1;
          c.rhs = f2;
          c.per_r = {{grid[k], f1}, {grid[k + 1], f2}};
          c.note = f.name + " increases on (" + format_rational(grid[k]) + ", " +
                   format_rational(grid[k + 1]) + ")";
          break;
        }
      }
      rep.conditions.push_back(std::move(c));
    };
    antitone(pair.p, cond::kRule2PAntitone);
    antitone(pair.d, cond::kRule2DAntitone);
  }

  detail::check_v0(rep, chain, inv, bundle.v0, wlist, opts, cond::kRule2V0Decrease,
                   cond::kRule2V0Barrier);
  detail::finalize_report(rep, covers, detail::initial_bound(chain, bundle.v0));
  return rep;
}

}  // namespace streett
