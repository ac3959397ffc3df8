#pragma once
// Built-in chain families and fixture chains, plus the closed-form value,
// ranking, and scalar functions used with them.
//
// lending-casino(epsilon): integer wealth, start at 1.  At or above 0 the coin
// is fair; below 0 winning $1 has probability (1-epsilon)/2.  Regions Profit
// (w > 0), Solvency (w >= 0), Debt (w < 0); the single Streett pair asks for
// finitely many Solvency visits.
// biased-walk(p): integer walk stepping +1 with probability p, start at 0.
// fig2 / fig3 / fig5: small explicit chains with labels {a}, {b} and one
// Streett pair (A = a-states, B = b-states).

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "streett/certificates.hpp"
#include "streett/chain.hpp"

namespace streett {

using AnyModel = std::variant<Model<std::string>, Model<std::int64_t>>;

inline Model<std::int64_t> lending_casino(const Rational& epsilon) {
  if (!(epsilon > 0 && epsilon < 1))
    fail("BadParameter", "lending-casino requires 0 < epsilon < 1, got " +
                             format_rational(epsilon));
  Model<std::int64_t> m;
  const Rational up = (1 - epsilon) / 2;
  const Rational down = (1 + epsilon) / 2;
  m.chain.initial = dirac<std::int64_t>(1);
  m.chain.kernel = [up, down](const std::int64_t& w) {
    if (w >= 0)
      return make_distribution<std::int64_t>({{w - 1, Rational(1, 2)}, {w + 1, Rational(1, 2)}});
    return make_distribution<std::int64_t>({{w + 1, up}, {w - 1, down}});
  };
  m.chain.labels = [](const std::int64_t& w) {
    return w < 0 ? std::set<std::string>{"debt"} : std::set<std::string>{};
  };
  m.chain.family = "lending-casino";
  m.params["epsilon"] = epsilon;
  m.regions["Profit"] = region_from_predicate<std::int64_t>(
      "Profit", [](const std::int64_t& w) { return w > 0; });
  m.regions["Solvency"] = region_from_predicate<std::int64_t>(
      "Solvency", [](const std::int64_t& w) { return w >= 0; });
  m.regions["Debt"] = region_from_predicate<std::int64_t>(
      "Debt", [](const std::int64_t& w) { return w < 0; });
  m.streett.pairs.push_back({m.regions["Solvency"], region_empty<std::int64_t>()});
  return m;
}

inline Model<std::int64_t> biased_walk(const Rational& p) {
  if (!(p > 0 && p < 1))
    fail("BadParameter", "biased-walk requires 0 < p < 1, got " + format_rational(p));
  Model<std::int64_t> m;
  m.chain.initial = dirac<std::int64_t>(0);
  const Rational q = 1 - p;
  m.chain.kernel = [p, q](const std::int64_t& w) {
    return make_distribution<std::int64_t>({{w + 1, p}, {w - 1, q}});
  };
  m.chain.family = "biased-walk";
  m.params["p"] = p;
  m.regions["Origin"] = region_from_states<std::int64_t>("Origin", {0});
  m.regions["NonNegative"] = region_from_predicate<std::int64_t>(
      "NonNegative", [](const std::int64_t& w) { return w >= 0; });
  m.regions["Negative"] = region_from_predicate<std::int64_t>(
      "Negative", [](const std::int64_t& w) { return w < 0; });
  return m;
}

namespace detail {

struct ExplicitSpec {
  std::vector<std::string> states;
  std::string initial;
  // state -> list of (successor, probability)
  std::map<std::string, std::vector<std::pair<std::string, Rational>>> rows;
  std::map<std::string, std::set<std::string>> labels;
  std::vector<std::string> a_states, b_states;
};

inline Model<std::string> explicit_model(const ExplicitSpec& spec) {
  Model<std::string> m;
  m.chain.initial = dirac<std::string>(spec.initial);
  auto rows = std::make_shared<std::map<std::string, std::vector<std::pair<std::string, Rational>>>>(
      spec.rows);
  m.chain.kernel = [rows](const std::string& s) {
    auto it = rows->find(s);
    if (it == rows->end()) fail("StateOutsideUniverse", "no kernel row for " + s);
    return make_distribution<std::string>(it->second);
  };
  std::vector<std::string> universe = spec.states;
  std::sort(universe.begin(), universe.end());
  m.chain.universe = universe;
  auto labels = std::make_shared<std::map<std::string, std::set<std::string>>>(spec.labels);
  m.chain.labels = [labels](const std::string& s) {
    auto it = labels->find(s);
    return it == labels->end() ? std::set<std::string>{} : it->second;
  };
  m.regions["A"] = region_from_states<std::string>("A", spec.a_states);
  m.regions["B"] = region_from_states<std::string>("B", spec.b_states);
  m.streett.pairs.push_back({m.regions["A"], m.regions["B"]});
  return m;
}

}  // namespace detail

// Five states: from s0 either the {s1,s2} alternation or the s3 -> s4 dead
// end.  Labels a on s1, s3; b on s2.
inline Model<std::string> fig2() {
  detail::ExplicitSpec spec;
  spec.states = {"s0", "s1", "s2", "s3", "s4"};
  spec.initial = "s0";
  spec.rows["s0"] = {{"s1", Rational(1, 2)}, {"s3", Rational(1, 2)}};
  spec.rows["s1"] = {{"s2", Rational(1)}};
  spec.rows["s2"] = {{"s1", Rational(1)}};
  spec.rows["s3"] = {{"s4", Rational(1)}};
  spec.rows["s4"] = {{"s4", Rational(1)}};
  spec.labels = {{"s1", {"a"}}, {"s2", {"b"}}, {"s3", {"a"}}};
  spec.a_states = {"s1", "s3"};
  spec.b_states = {"s2"};
  return detail::explicit_model(spec);
}

// Six states: uniform branch to the alternation, the dead end, or the
// self-looping s5 that keeps label a alive forever.
inline Model<std::string> fig3() {
  detail::ExplicitSpec spec;
  spec.states = {"s0", "s1", "s2", "s3", "s4", "s5"};
  spec.initial = "s0";
  spec.rows["s0"] = {{"s1", Rational(1, 3)}, {"s3", Rational(1, 3)}, {"s5", Rational(1, 3)}};
  spec.rows["s1"] = {{"s2", Rational(1)}};
  spec.rows["s2"] = {{"s1", Rational(1)}};
  spec.rows["s3"] = {{"s4", Rational(1)}};
  spec.rows["s4"] = {{"s4", Rational(1)}};
  spec.rows["s5"] = {{"s5", Rational(1)}};
  spec.labels = {{"s1", {"a"}}, {"s2", {"b"}}, {"s3", {"a"}}, {"s5", {"a"}}};
  spec.a_states = {"s1", "s3", "s5"};
  spec.b_states = {"s2"};
  return detail::explicit_model(spec);
}

// Like fig3 but the alternation leaks into the absorbing b-free state s2
// through s6, and carries named invariant and absorbing regions.
inline Model<std::string> fig5() {
  detail::ExplicitSpec spec;
  spec.states = {"s0", "s1", "s2", "s3", "s4", "s5", "s6"};
  spec.initial = "s0";
  spec.rows["s0"] = {{"s1", Rational(1, 3)}, {"s3", Rational(1, 3)}, {"s5", Rational(1, 3)}};
  spec.rows["s1"] = {{"s6", Rational(1)}};
  spec.rows["s6"] = {{"s1", Rational(1, 2)}, {"s2", Rational(1, 2)}};
  spec.rows["s2"] = {{"s2", Rational(1)}};
  spec.rows["s3"] = {{"s4", Rational(1)}};
  spec.rows["s4"] = {{"s4", Rational(1)}};
  spec.rows["s5"] = {{"s5", Rational(1)}};
  spec.labels = {{"s1", {"a"}}, {"s2", {"b"}}, {"s3", {"a"}}, {"s5", {"a"}}};
  spec.a_states = {"s1", "s3", "s5"};
  spec.b_states = {"s2"};
  Model<std::string> m = detail::explicit_model(spec);
  m.regions["I"] =
      region_from_states<std::string>("I", {"s0", "s1", "s2", "s3", "s4", "s6"});
  m.regions["J1"] = region_from_states<std::string>("J1", {"s4", "s6"});
  return m;
}

// Casino truncated to the window [lo, hi]: transitions leaving the window are
// redirected to the absorbing boundary state lo-1.
inline Model<std::int64_t> truncated_casino(const Rational& epsilon, std::int64_t lo,
                                            std::int64_t hi) {
  if (lo > hi) fail("BadParameter", "empty truncation window");
  Model<std::int64_t> full = lending_casino(epsilon);
  Model<std::int64_t> m;
  const std::int64_t sink = lo - 1;
  std::vector<std::int64_t> universe;
  for (std::int64_t s = sink; s <= hi; ++s) universe.push_back(s);
  m.chain.universe = universe;
  m.chain.initial = full.chain.initial;
  auto base = full.chain.kernel;
  m.chain.kernel = [base, lo, hi, sink](const std::int64_t& w) {
    if (w == sink) return dirac<std::int64_t>(sink);
    std::vector<std::pair<std::int64_t, Rational>> entries;
    for (const auto& [u, p] : base(w).support)
      entries.emplace_back(u < lo || u > hi ? sink : u, p);
    return make_distribution<std::int64_t>(entries);
  };
  m.chain.labels = full.chain.labels;
  m.chain.family = "";
  m.params = full.params;
  m.regions = full.regions;
  m.streett = full.streett;
  return m;
}

// ---------------------------------------------------------------------------
// Closed-form certificate pieces for the casino.

// rho^|w| below 0 and 1 at or above 0, with rho = (1-eps)/(1+eps): the
// probability of ever returning to Solvency.
inline ValueFunction<std::int64_t> casino_v1(const Rational& epsilon) {
  const Rational rho = (1 - epsilon) / (1 + epsilon);
  return {"casino-v1", [rho](const std::int64_t& w) {
            if (w >= 0) return Rational(1);
            return rational_pow(rho, static_cast<std::uint64_t>(-w));
          }};
}

// Same statistic in double precision, for long simulations.
inline std::function<double(const std::int64_t&)> casino_v1_stat(const Rational& epsilon) {
  const double rho = to_double((1 - epsilon) / (1 + epsilon));
  return [rho](const std::int64_t& w) {
    if (w >= 0) return 1.0;
    return std::pow(rho, static_cast<double>(-w));
  };
}

// max(w+1, 0): supermartingale and ranking for the Solvency-exit argument.
inline ValueFunction<std::int64_t> max_plus_one_value() {
  return {"max-plus-one", [](const std::int64_t& w) {
            return w + 1 > 0 ? Rational(static_cast<long>(w + 1)) : Rational(0);
          }};
}

inline RankingFunction<std::int64_t> max_plus_one_ranking() {
  return {"max-plus-one", [](const std::int64_t& w) {
            return w + 1 > 0 ? static_cast<std::uint64_t>(w + 1) : 0ULL;
          }};
}

// min(1, r): increasing, used as a non-antitone counterexample.
inline MonotoneScalarFunction min_one_r() {
  return {"min-1-r", [](const Rational& r) { return r < 1 ? r : Rational(1); }};
}

// ---------------------------------------------------------------------------
// Family registry.

inline Rational require_param(const std::map<std::string, Rational>& params,
                              const std::string& key, const std::string& family) {
  auto it = params.find(key);
  if (it == params.end())
    fail("BadParameter", family + " requires parameter '" + key + "'");
  return it->second;
}

inline AnyModel builtin(const std::string& name, const std::map<std::string, Rational>& params) {
  if (name == "lending-casino")
    return lending_casino(require_param(params, "epsilon", name));
  if (name == "biased-walk") return biased_walk(require_param(params, "p", name));
  if (name == "fig2") return fig2();
  if (name == "fig3") return fig3();
  if (name == "fig5") return fig5();
  fail("UnknownFamily", "no builtin chain family named '" + name + "'");
}

}  // namespace streett
