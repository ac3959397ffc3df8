// Exact-oracle ground truth: BSCC analysis, hitting and return
// probabilities, Streett acceptance, and the positive-return (Orey) check.
// Figure values are frozen; properties run over seeded random chains.

#include <algorithm>

#include <catch2/catch_amalgamated.hpp>

#include "streett/builtins.hpp"
#include "streett/oracle.hpp"
#include "streett/truncation.hpp"
#include "support.hpp"

using namespace streett;

namespace {

const Model<std::string>& fig2m() {
  static auto m = std::get<Model<std::string>>(builtin("fig2", {}));
  return m;
}
const Model<std::string>& fig3m() {
  static auto m = std::get<Model<std::string>>(builtin("fig3", {}));
  return m;
}
const Model<std::string>& fig5m() {
  static auto m = std::get<Model<std::string>>(builtin("fig5", {}));
  return m;
}

std::vector<std::string> bscc_states(const Bscc<std::string>& b) {
  auto out = b.states;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("figure chains have the expected bottom components") {
  auto b2 = bsccs(fig2m().chain, fig2m().streett);
  REQUIRE(b2.size() == 2);
  std::sort(b2.begin(), b2.end(),
            [](const auto& x, const auto& y) { return x.states.front() < y.states.front(); });
  REQUIRE(bscc_states(b2[0]) == std::vector<std::string>{"s1", "s2"});
  REQUIRE(b2[0].accepting);  // alternation visits b infinitely often
  REQUIRE(bscc_states(b2[1]) == std::vector<std::string>{"s4"});
  REQUIRE(b2[1].accepting);  // no a-state at all

  auto b3 = bsccs(fig3m().chain, fig3m().streett);
  REQUIRE(b3.size() == 3);
  int accepting = 0;
  for (const auto& b : b3) {
    if (b.accepting) ++accepting;
    if (bscc_states(b) == std::vector<std::string>{"s5"}) REQUIRE_FALSE(b.accepting);
  }
  REQUIRE(accepting == 2);
}

TEST_CASE("hitting and return probabilities match hand calculations") {
  const auto& m = fig3m();
  auto target = testing::named("loop", {"s2"});
  REQUIRE(reach_probability(m.chain, target) == Rational(1, 3));
  auto per = per_state_reach(m.chain, target);
  REQUIRE(per.at("s1") == 1);
  REQUIRE(per.at("s2") == 1);
  REQUIRE(per.at("s4") == 0);
  REQUIRE(per.at("s0") == Rational(1, 3));

  // sigma and tau disagree exactly on target states
  REQUIRE(return_probability(m.chain, target, std::string("s2")) == 1);   // s2 -> s1 -> s2
  REQUIRE(return_probability(m.chain, target, std::string("s4")) == 0);
  REQUIRE(return_probability(m.chain, testing::named("dead", {"s4"}), std::string("s4")) == 1);

  // from = explicit distribution overrides the model initial
  REQUIRE(reach_probability<std::string>(m.chain, target, dirac<std::string>("s3")) == 0);
}

TEST_CASE("streett probabilities reproduce the paper examples") {
  REQUIRE(streett_probability(fig2m().chain, fig2m().streett) == 1);
  REQUIRE(streett_probability(fig3m().chain, fig3m().streett) == Rational(2, 3));
  REQUIRE(streett_probability(fig5m().chain, fig5m().streett) == Rational(2, 3));

  auto per = per_state_streett(fig3m().chain, fig3m().streett);
  REQUIRE(per.at("s0") == Rational(2, 3));
  REQUIRE(per.at("s5") == 0);
  REQUIRE(per.at("s1") == 1);

  // empty condition accepts everything
  StreettCondition<std::string> empty;
  REQUIRE(streett_probability(fig3m().chain, empty) == 1);
}

TEST_CASE("orey check reproduces the running example") {
  const auto& m = fig2m();
  const auto& a = m.regions.at("A");
  const auto& b = m.regions.at("B");
  auto r1 = check_orey(m.chain, a, b);
  REQUIRE_FALSE(r1.holds);
  REQUIRE(r1.infimum == 0);  // s3 never returns to s2

  auto extended = region_union(b, testing::named("J", {"s4"}));
  auto r2 = check_orey(m.chain, a, extended);
  REQUIRE(r2.holds);
  REQUIRE(r2.infimum == 1);

  auto r3 = check_orey(m.chain, region_empty<std::string>(), b);
  REQUIRE(r3.holds);
  REQUIRE(r3.infimum == 1);
}

TEST_CASE("orey positivity forces single-pair acceptance") {
  // Thm 3.3 soundness: a positive infimum makes Fin(A) or Inf(B) almost sure
  CounterRng rng(13, 0);
  int checked = 0;
  for (int iter = 0; iter < 120; ++iter) {
    auto m = testing::random_chain(rng, 10, 1);
    const auto& pair = m.streett.pairs.front();
    auto orey = check_orey(m.chain, pair.fin, pair.inf);
    if (!orey.holds) continue;
    ++checked;
    REQUIRE(streett_probability(m.chain, m.streett) == 1);
  }
  REQUIRE(checked >= 10);
}

TEST_CASE("adding a streett pair never raises the acceptance probability") {
  CounterRng rng(17, 0);
  for (int iter = 0; iter < 60; ++iter) {
    auto m = testing::random_chain(rng, 10, 2);
    StreettCondition<std::int64_t> fewer;
    fewer.pairs.push_back(m.streett.pairs.front());
    REQUIRE(streett_probability(m.chain, m.streett) <=
            streett_probability(m.chain, fewer));
  }
}

TEST_CASE("runs are absorbed: per-BSCC hitting probabilities sum to one") {
  CounterRng rng(19, 0);
  for (int iter = 0; iter < 60; ++iter) {
    auto m = testing::random_chain(rng, 10, 1);
    Rational total(0);
    for (const auto& b : bsccs(m.chain, m.streett))
      total += reach_probability(m.chain,
                                 region_from_states<std::int64_t>("bscc", b.states));
    REQUIRE(total == 1);
  }
}

TEST_CASE("truncated casino approaches the paper return probability") {
  // exact value of the infinite chain is (1-eps)/(1+eps) = 2/3 at eps = 1/5
  const Rational rho(2, 3);
  Rational prev(0);
  for (std::int64_t n : {5LL, 10LL, 40LL}) {
    auto t = truncated_casino(Rational(1, 5), -n, 1);
    const Rational p = reach_probability<std::int64_t>(
        t.chain, t.regions.at("Solvency"), dirac<std::int64_t>(-1));
    REQUIRE(p < rho);
    REQUIRE(p > prev);  // monotone in the window size
    prev = p;
  }
  REQUIRE(rho - prev < Rational(1, 1000));  // within 1e-3 by the window [-40, 1]
}

TEST_CASE("finite index validation rejects broken chains") {
  Model<std::int64_t> m;
  m.chain.universe = std::vector<std::int64_t>{0, 1};
  m.chain.initial = dirac<std::int64_t>(0);
  m.chain.kernel = [](const std::int64_t&) { return dirac<std::int64_t>(7); };
  REQUIRE_THROWS_AS(streett_probability(m.chain, m.streett), Error);  // successor outside universe

  auto casino = std::get<Model<std::int64_t>>(
      builtin("lending-casino", {{"epsilon", Rational(1, 5)}}));
  REQUIRE_THROWS_AS(streett_probability(casino.chain, casino.streett), Error);  // infinite
}

TEST_CASE("bounded reach interval collapses on trivial and closed windows") {
  auto casino = lending_casino(Rational(1, 5));
  // start inside the target: both solves hit immediately
  auto iv = bounded_reach_interval<std::int64_t>(casino.chain, casino.regions.at("Solvency"),
                                                 {0, 1, 2}, dirac<std::int64_t>(1));
  REQUIRE(iv.lower == 1);
  REQUIRE(iv.upper == 1);

  // a window covering a finite chain reproduces the exact oracle value
  auto m = fig5();
  auto goal = region_from_states<std::string>("goal", {"s2"});
  const Rational exact = reach_probability(m.chain, goal);
  auto whole = bounded_reach_interval<std::string>(
      m.chain, goal, {"s0", "s1", "s2", "s3", "s4", "s5", "s6"}, m.chain.initial);
  REQUIRE(exact == Rational(1, 3));
  REQUIRE(whole.lower == exact);
  REQUIRE(whole.upper == exact);
}

TEST_CASE("windows that cannot reach the target keep a vacuous lower bound") {
  auto casino = lending_casino(Rational(1, 5));
  auto iv = bounded_reach_interval<std::int64_t>(casino.chain, casino.regions.at("Solvency"),
                                                 {-5, -4, -3, -2, -1}, dirac<std::int64_t>(-3));
  REQUIRE(iv.lower == 0);  // no target state inside the window
  REQUIRE(iv.upper == 1);  // every trajectory eventually exits, optimism credits it
}

TEST_CASE("nested windows tighten both truncation bounds monotonically") {
  auto m = fig5();
  auto goal = region_from_states<std::string>("goal", {"s2"});
  const std::vector<std::vector<std::string>> windows = {
      {"s0", "s1", "s6"},
      {"s0", "s1", "s2", "s5", "s6"},
      {"s0", "s1", "s2", "s3", "s4", "s5", "s6"}};
  ProbabilityInterval prev{Rational(0), Rational(1)};
  for (const auto& w : windows) {
    auto iv = bounded_reach_interval<std::string>(m.chain, goal, w, m.chain.initial);
    REQUIRE(iv.lower >= prev.lower);
    REQUIRE(iv.upper <= prev.upper);
    REQUIRE(iv.lower <= Rational(1, 3));  // brackets the true value throughout
    REQUIRE(iv.upper >= Rational(1, 3));
    prev = iv;
  }
  REQUIRE(prev.lower == Rational(1, 3));  // the full window is exact
  REQUIRE(prev.upper == Rational(1, 3));
}

TEST_CASE("truncation rejects windows missing the start support") {
  auto casino = lending_casino(Rational(1, 5));
  REQUIRE_THROWS_AS(
      bounded_reach_interval<std::int64_t>(casino.chain, casino.regions.at("Solvency"), {0, 1},
                                           dirac<std::int64_t>(-1)),
      Error);
  REQUIRE_THROWS_AS(
      bounded_reach_interval<std::int64_t>(casino.chain, casino.regions.at("Solvency"), {},
                                           dirac<std::int64_t>(0)),
      Error);
}
