// Certificate checkers: exact bounds, frozen fixture verdicts, reproducible
// failure witnesses, and the checker error conditions.

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "streett/builtins.hpp"
#include "streett/cert_io.hpp"
#include "streett/certificates.hpp"
#include "streett/model_io.hpp"
#include "streett/oracle.hpp"
#include "streett/synthesis.hpp"
#include "support.hpp"

#include <fstream>
#include <sstream>

using namespace streett;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(STREETT_SOURCE_DIR "/fixtures/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CheckOptions grid_options(std::int64_t lo, std::int64_t hi) {
  CheckOptions o;
  for (std::int64_t r = lo; r <= hi; ++r) o.r_grid.push_back(Rational(static_cast<long>(r)));
  return o;
}

}  // namespace

TEST_CASE("quantitative safety witness is exact and complete") {
  auto m = std::get<Model<std::string>>(builtin("fig3", {}));
  const auto x = region_from_states<std::string>(
      "X", {"s0", "s1", "s2", "s3", "s4"});
  const ValueFunction<std::string> v = witness_quant_safety(m.chain, x);

  // V is the exit probability: 1/3 from the branch state, 1 on the exit
  REQUIRE(v.value("s0") == Rational(1, 3));
  REQUIRE(v.value("s1") == 0);
  REQUIRE(v.value("s4") == 0);
  REQUIRE(v.value("s5") == 1);

  const auto rep = check_quant_safety(m.chain, x, v);
  REQUIRE(rep.verdict == Verdict::Pass);
  REQUIRE(rep.bound.has_value());

  const Rational stay = 1 - reach_probability(m.chain, region_complement(x));
  REQUIRE(*rep.bound == stay);
  REQUIRE(*rep.bound == Rational(2, 3));
}

TEST_CASE("shifting the value function weakens the bound by that constant") {
  auto m = std::get<Model<std::string>>(builtin("fig3", {}));
  const auto x = region_from_states<std::string>(
      "X", {"s0", "s1", "s2", "s3", "s4"});
  const ValueFunction<std::string> v = witness_quant_safety(m.chain, x);
  const Rational c(1, 8);
  auto base = v.value;
  const ValueFunction<std::string> shifted{
      "shifted", [base, c](const std::string& s) -> Rational { return base(s) + c; }};

  const auto rep = check_quant_safety(m.chain, x, v);
  const auto rep2 = check_quant_safety(m.chain, x, shifted);
  REQUIRE(rep2.verdict == Verdict::Pass);
  REQUIRE(*rep2.bound == *rep.bound - c);
}

TEST_CASE("failure witness is the smallest violating state") {
  auto m = std::get<Model<std::string>>(builtin("fig2", {}));
  // V := 1 on s2 and s3 only: the decrease condition breaks at s0 and s1
  const ValueFunction<std::string> v = table_value_function<std::string>(
      "bad", {{"s2", Rational(1)}, {"s3", Rational(1)}}, Rational(0));
  const auto rep = check_quant_safety(m.chain, region_all<std::string>(), v);
  REQUIRE(rep.verdict == Verdict::Fail);
  const auto* fail_cond = rep.first_failure();
  REQUIRE(fail_cond != nullptr);
  REQUIRE(fail_cond->id == std::string(cond::kQuantDecrease));
  REQUIRE(fail_cond->witness == std::optional<std::string>("s0"));
  REQUIRE(fail_cond->lhs == Rational(1, 2));  // P V at s0
  REQUIRE(fail_cond->rhs == Rational(0));     // V at s0
}

TEST_CASE("qualitative safety on the casino window") {
  auto m = std::get<Model<std::int64_t>>(builtin("lending-casino", {{"epsilon", Rational(1, 5)}}));
  const ValueFunction<std::int64_t> v = casino_v1(Rational(1, 5));
  const auto rep = check_qual_safety(m.chain, m.regions.at("Solvency"), m.regions.at("Debt"), v,
                                     window_range(-50, 50));
  REQUIRE(rep.verdict == Verdict::PassOnWindow);
  REQUIRE(rep.bound.has_value());
  REQUIRE(*rep.bound == Rational(1, 3));  // gamma = 1 - rho, rho = 2/3
  const auto* margin = rep.find(cond::kQualMargin);
  REQUIRE(margin != nullptr);
  REQUIRE(margin->value == Rational(1, 3));
}

TEST_CASE("overlapping avoided and absorbing regions are rejected") {
  auto m = std::get<Model<std::int64_t>>(builtin("lending-casino", {{"epsilon", Rational(1, 5)}}));
  const ValueFunction<std::int64_t> v = casino_v1(Rational(1, 5));
  REQUIRE_THROWS_AS(check_qual_safety(m.chain, m.regions.at("Solvency"), m.regions.at("Profit"), v,
                                      window_range(-10, 10)),
                    Error);
}

TEST_CASE("semantic decomposition check on the bundled figures") {
  SECTION("fig5 with its named regions") {
    auto m = std::get<Model<std::string>>(builtin("fig5", {}));
    DecompositionWitness<std::string> w{m.regions.at("I"), {m.regions.at("J1")}};
    const auto rep = check_decomposition_semantic(m.chain, m.streett, w);
    REQUIRE(rep.verdict == Verdict::Pass);
    REQUIRE(*rep.bound == Rational(2, 3));
    const auto* escape = rep.find(cond::kDecompEscape, 0);
    REQUIRE(escape != nullptr);
    REQUIRE(escape->value == Rational(1, 2));  // sup over J1 of return to A
    REQUIRE(*rep.bound <= streett_probability(m.chain, m.streett));
  }
  SECTION("fig3 with the maximal proper invariant") {
    auto m = std::get<Model<std::string>>(builtin("fig3", {}));
    DecompositionWitness<std::string> w{
        region_from_states<std::string>("I", {"s0", "s1", "s2", "s3", "s4"}),
        {region_from_states<std::string>("J", {"s4"})}};
    const auto rep = check_decomposition_semantic(m.chain, m.streett, w);
    REQUIRE(rep.verdict == Verdict::Pass);
    REQUIRE(*rep.bound == Rational(2, 3));
  }
  SECTION("fig3 with the whole space rejects at the recurrence condition") {
    auto m = std::get<Model<std::string>>(builtin("fig3", {}));
    DecompositionWitness<std::string> w{region_all<std::string>(),
                                        {region_from_states<std::string>("J", {"s4"})}};
    const auto rep = check_decomposition_semantic(m.chain, m.streett, w);
    REQUIRE(rep.verdict == Verdict::Fail);
    const auto* fail_cond = rep.first_failure();
    REQUIRE(fail_cond != nullptr);
    REQUIRE(fail_cond->id == std::string(cond::kDecompRecur));
    REQUIRE(fail_cond->witness == std::optional<std::string>("s5"));
    REQUIRE(fail_cond->lhs == Rational(0));
    REQUIRE(fail_cond->rhs == Rational(1));
  }
  SECTION("pair count mismatch") {
    auto m = std::get<Model<std::string>>(builtin("fig3", {}));
    DecompositionWitness<std::string> w{region_all<std::string>(), {}};
    REQUIRE_THROWS_AS(check_decomposition_semantic(m.chain, m.streett, w), Error);
  }
}

TEST_CASE("rule 1 on the casino with the closed-form certificate") {
  auto m = std::get<Model<std::int64_t>>(builtin("lending-casino", {{"epsilon", Rational(1, 5)}}));
  Rule1Bundle<std::int64_t> bundle;
  bundle.witness = {region_all<std::int64_t>(), {m.regions.at("Debt")}};
  bundle.v0 = constant_value<std::int64_t>("zero", Rational(0));
  bundle.pairs.push_back({casino_v1(Rational(1, 5)), max_plus_one_value(),
                          max_plus_one_ranking(), std::nullopt});

  const auto rep =
      check_rule1(m.chain, m.streett, bundle, window_range(-50, 50), grid_options(0, 50));
  REQUIRE(rep.verdict == Verdict::PassOnWindow);
  REQUIRE(*rep.bound == Rational(1));
  REQUIRE(rep.find(cond::kRule1VMargin, 0)->value == Rational(1, 3));
  REQUIRE(rep.find(cond::kRule1Progress, 0)->value == Rational(1, 2));
  REQUIRE(rep.find(cond::kRule1Bounded, 0)->value == Rational(51));

  SECTION("the r grid must be non-empty") {
    REQUIRE_THROWS_AS(check_rule1(m.chain, m.streett, bundle, window_range(-50, 50), {}), Error);
  }
  SECTION("pair count mismatch") {
    bundle.pairs.push_back(bundle.pairs[0]);
    REQUIRE_THROWS_AS(
        check_rule1(m.chain, m.streett, bundle, window_range(-50, 50), grid_options(0, 50)),
        Error);
  }
}

TEST_CASE("rule 2 on the casino with unit decrease") {
  auto m = std::get<Model<std::int64_t>>(builtin("lending-casino", {{"epsilon", Rational(1, 5)}}));
  Rule2Bundle<std::int64_t> bundle;
  bundle.witness = {region_all<std::int64_t>(), {m.regions.at("Debt")}};
  bundle.v0 = constant_value<std::int64_t>("zero", Rational(0));
  bundle.pairs.push_back({casino_v1(Rational(1, 5)), max_plus_one_value(),
                          constant_scalar("one", Rational(1)),
                          constant_scalar("half", Rational(1, 2)), std::nullopt});

  const auto rep =
      check_rule2(m.chain, m.streett, bundle, window_range(-50, 50), grid_options(0, 50));
  REQUIRE(rep.verdict == Verdict::PassOnWindow);
  REQUIRE(*rep.bound == Rational(1));

  SECTION("a decrease larger than any step fails the drift condition") {
    bundle.pairs[0].d = constant_scalar("three", Rational(3));
    const auto bad =
        check_rule2(m.chain, m.streett, bundle, window_range(-50, 50), grid_options(0, 50));
    REQUIRE(bad.verdict == Verdict::Fail);
    const auto* drift = bad.find(cond::kRule2Drift, 0);
    REQUIRE(drift->verdict == Verdict::Fail);
    REQUIRE(drift->witness == std::optional<std::int64_t>(0));
    REQUIRE(drift->lhs == Rational(0));
    REQUIRE(drift->rhs == Rational(1, 2));
  }
  SECTION("an increasing probability fails antitonicity") {
    bundle.pairs[0].p = min_one_r();
    CheckOptions o;
    o.r_grid = {Rational(1, 2), Rational(2)};
    const auto bad = check_rule2(m.chain, m.streett, bundle, window_range(-50, 50), o);
    REQUIRE(bad.verdict == Verdict::Fail);
    const auto* anti = bad.find(cond::kRule2PAntitone, 0);
    REQUIRE(anti->verdict == Verdict::Fail);
    REQUIRE(anti->lhs == Rational(1, 2));
    REQUIRE(anti->rhs == Rational(1));
    REQUIRE(anti->note.find("increases") != std::string::npos);
  }
}

TEST_CASE("fixture certificates replay with frozen verdicts") {
  struct Case {
    const char* model;
    const char* cert;
    Verdict verdict;
    const char* bound;       // "" when the verdict is Fail
    const char* fail_id;     // first failing condition
    const char* witness;     // "" when the failure carries no witness
  };
  const Case cases[] = {
      {"fig3.json", "fig3-quant.json", Verdict::Pass, "2/3", "", ""},
      {"fig3.json", "fig3-quant-bad.json", Verdict::Fail, "", "Thm4.1/Eq.61", "s0"},
      {"casino.json", "casino-qual.json", Verdict::PassOnWindow, "1/3", "", ""},
      {"casino.json", "casino-qual-bad.json", Verdict::Fail, "", "Thm4.2/Eq.64", "0"},
      {"fig2.json", "fig2-decomposition.json", Verdict::Pass, "1", "", ""},
      {"fig3.json", "fig3-decomposition.json", Verdict::Pass, "2/3", "", ""},
      {"fig3.json", "fig3-decomposition-bad.json", Verdict::Fail, "", "Thm3.5/Eq.18", "s5"},
      {"fig5.json", "fig5-decomposition.json", Verdict::Pass, "2/3", "", ""},
      {"casino.json", "casino-rule1.json", Verdict::PassOnWindow, "1", "", ""},
      {"casino.json", "casino-rule1-u-zero.json", Verdict::Fail, "", "Rule1/Eq.73", "0"},
      {"casino.json", "casino-rule1-w-hole.json", Verdict::Fail, "", "Rule1/Eq.70", "0"},
      {"casino.json", "casino-rule2.json", Verdict::PassOnWindow, "1", "", ""},
      {"casino.json", "casino-rule2-d3.json", Verdict::Fail, "", "Rule2/Eq.83", "0"},
      {"casino.json", "casino-rule2-p-bad.json", Verdict::Fail, "", "Rule2/Eq.83", "0"},
  };
  for (const Case& c : cases) {
    INFO(c.cert);
    const ParsedModel pm = parse_model(slurp(c.model));
    const CertRunOutcome out = run_certificate_any(pm, slurp(c.cert));
    REQUIRE(out.verdict == c.verdict);
    const nlohmann::json j = nlohmann::json::parse(out.json);
    if (c.verdict != Verdict::Fail) {
      REQUIRE(j.at("bound").get<std::string>() == c.bound);
    } else {
      bool found = false;
      for (const auto& e : j.at("conditions")) {
        if (e.at("verdict").get<std::string>() != "Fail") continue;
        REQUIRE(e.at("id").get<std::string>() == c.fail_id);
        if (*c.witness) REQUIRE(e.at("witness").get<std::string>() == c.witness);
        // a failure must be self-validating: both sides recorded, or a note
        REQUIRE((e.contains("lhs") == e.contains("rhs")));
        REQUIRE((e.contains("lhs") || e.contains("note")));
        found = true;
        break;
      }
      REQUIRE(found);
    }
  }
}

TEST_CASE("the non-antitone probability fixture also fails antitonicity") {
  const ParsedModel pm = parse_model(slurp("casino.json"));
  const CertRunOutcome out = run_certificate_any(pm, slurp("casino-rule2-p-bad.json"));
  REQUIRE(out.verdict == Verdict::Fail);
  const nlohmann::json j = nlohmann::json::parse(out.json);
  bool saw = false;
  for (const auto& e : j.at("conditions")) {
    if (e.at("id") != "Rule2/Eq.84" || e.at("verdict") != "Fail") continue;
    REQUIRE(e.at("lhs").get<std::string>() == "1/2");
    REQUIRE(e.at("rhs").get<std::string>() == "1");
    REQUIRE(e.at("note").get<std::string>().find("increases") != std::string::npos);
    saw = true;
  }
  REQUIRE(saw);
}

TEST_CASE("failure sides reproduce under independent re-evaluation") {
  // w-hole: W patched to 0 at the origin; the supermartingale inequality at
  // the witness must recompute to exactly the recorded sides
  auto m = std::get<Model<std::int64_t>>(builtin("lending-casino", {{"epsilon", Rational(1, 5)}}));
  auto w = max_plus_one_value();
  auto base = w.value;
  const ValueFunction<std::int64_t> holed{
      "holed", [base](const std::int64_t& s) -> Rational { return s == 0 ? Rational(0) : base(s); }};
  Rule1Bundle<std::int64_t> bundle;
  bundle.witness = {region_all<std::int64_t>(), {m.regions.at("Debt")}};
  bundle.v0 = constant_value<std::int64_t>("zero", Rational(0));
  bundle.pairs.push_back(
      {casino_v1(Rational(1, 5)), holed, max_plus_one_ranking(), std::nullopt});
  const auto rep =
      check_rule1(m.chain, m.streett, bundle, window_range(-50, 50), grid_options(0, 50));
  REQUIRE(rep.verdict == Verdict::Fail);
  const auto* fail_cond = rep.first_failure();
  REQUIRE(fail_cond->id == std::string(cond::kRule1WDecrease));
  REQUIRE(fail_cond->witness == std::optional<std::int64_t>(0));
  const Rational pv = expectation(m.chain.kernel(0), holed.value);
  REQUIRE(fail_cond->lhs == pv);
  REQUIRE(fail_cond->rhs == holed.value(0));
  REQUIRE(pv > holed.value(0));
}
