// Model documents: golden equality between the bundled explicit fixtures and
// the builtin families, serialization fixed points, and parse errors that
// name the offending document path.

#include <catch2/catch_amalgamated.hpp>

#include "streett/builtins.hpp"
#include "streett/model_io.hpp"
#include "streett/oracle.hpp"
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

// what() of the ValidationError raised for the document, "" when it parses
std::string parse_failure(const std::string& text) {
  try {
    parse_model(text);
    return "";
  } catch (const Error& e) {
    return e.what();
  }
}

const char* kMini = R"({
  "format": "streett-model/1",
  "chain": {
    "states": ["a", "b"],
    "initial": "a",
    "rows": {"a": {"b": "ROW"}, "b": {"b": 1}}
  }
})";

std::string mini_with_row(const std::string& row) {
  std::string doc = kMini;
  return doc.replace(doc.find("\"ROW\""), 5, row);
}

}  // namespace

TEST_CASE("bundled figure documents equal the builtin families") {
  for (const std::string name : {"fig2", "fig3", "fig5"}) {
    INFO(name);
    const ParsedModel pm = parse_model(slurp(name + ".json"));
    const auto& doc = std::get<Model<std::string>>(pm.model);
    const auto ref = std::get<Model<std::string>>(builtin(name, {}));

    const auto& universe = universe_of(doc.chain);
    REQUIRE(universe == universe_of(ref.chain));
    REQUIRE(doc.chain.initial.support == ref.chain.initial.support);
    for (const auto& s : universe) {
      REQUIRE(doc.chain.kernel(s).support == ref.chain.kernel(s).support);
      REQUIRE(doc.chain.labels(s) == ref.chain.labels(s));
    }
    REQUIRE(doc.streett.pairs.size() == ref.streett.pairs.size());
    for (std::size_t i = 0; i < doc.streett.pairs.size(); ++i)
      for (const auto& s : universe) {
        REQUIRE(doc.streett.pairs[i].fin.member(s) == ref.streett.pairs[i].fin.member(s));
        REQUIRE(doc.streett.pairs[i].inf.member(s) == ref.streett.pairs[i].inf.member(s));
      }
    REQUIRE(streett_probability(doc.chain, doc.streett) ==
            streett_probability(ref.chain, ref.streett));
  }
}

TEST_CASE("fig5 document carries the named decomposition regions") {
  const ParsedModel pm = parse_model(slurp("fig5.json"));
  const auto& m = std::get<Model<std::string>>(pm.model);
  REQUIRE(enumerate_region(m.chain, m.regions.at("I")) ==
          std::vector<std::string>{"s0", "s1", "s2", "s3", "s4", "s6"});
  REQUIRE(enumerate_region(m.chain, m.regions.at("J1")) ==
          std::vector<std::string>{"s4", "s6"});
}

TEST_CASE("serialization reaches a fixed point after one round") {
  for (const std::string name :
       {"fig2.json", "fig3.json", "fig5.json", "casino.json", "product-debt.json"}) {
    INFO(name);
    const std::string once = serialize_model(parse_model(slurp(name)));
    const std::string twice = serialize_model(parse_model(once));
    REQUIRE(once == twice);
  }
}

TEST_CASE("builtin documents serialize as family references") {
  const ParsedModel pm = parse_model(slurp("casino.json"));
  const auto& m = std::get<Model<std::int64_t>>(pm.model);
  REQUIRE(m.chain.family == "lending-casino");
  REQUIRE(m.params.at("epsilon") == Rational(1, 5));
  const Json j = Json::parse(serialize_model(pm));
  REQUIRE(j.at("chain").at("builtin") == "lending-casino");
  REQUIRE(j.at("chain").at("params").at("epsilon") == "1/5");
  REQUIRE_FALSE(j.at("chain").contains("rows"));
}

TEST_CASE("labels may not be overridden on a builtin family") {
  const std::string doc = R"({
    "format": "streett-model/1",
    "chain": {"builtin": "lending-casino", "params": {"epsilon": "1/5"}},
    "labels": {"0": ["debt"]}
  })";
  const std::string err = parse_failure(doc);
  REQUIRE(err.find("$.labels") != std::string::npos);
  REQUIRE(err.find("builtin") != std::string::npos);
}

TEST_CASE("automaton sections parse and round-trip") {
  const ParsedModel pm = parse_model(slurp("product-debt.json"));
  REQUIRE(pm.automaton.has_value());
  REQUIRE(pm.automaton->states == std::vector<std::string>{"qS", "qD"});
  REQUIRE(pm.automaton->initial == "qS");
  REQUIRE(pm.automaton->acceptance.size() == 1);

  const ParsedModel again = parse_model(serialize_model(pm));
  REQUIRE(again.automaton.has_value());
  REQUIRE(again.automaton->states == pm.automaton->states);
  REQUIRE(again.automaton->transitions == pm.automaton->transitions);
  REQUIRE(again.automaton->acceptance == pm.automaton->acceptance);
}

TEST_CASE("parse errors name the offending path") {
  SECTION("row that does not sum to one") {
    const std::string err = parse_failure(mini_with_row("\"1/2\""));
    REQUIRE(err.find("$.chain.rows.a") != std::string::npos);
    REQUIRE(err.find("row sums to 1/2") != std::string::npos);
  }
  SECTION("floating point probabilities are rejected") {
    const std::string err = parse_failure(mini_with_row("0.5"));
    REQUIRE(err.find("$.chain.rows.a.b") != std::string::npos);
    REQUIRE(err.find("'p/q' string") != std::string::npos);
  }
  SECTION("unknown successor state") {
    std::string doc = kMini;
    const std::string needle = "{\"b\": \"ROW\"}";
    doc.replace(doc.find(needle), needle.size(), "{\"c\": 1}");
    const std::string err = parse_failure(doc);
    REQUIRE(err.find("$.chain.rows.a.c") != std::string::npos);
    REQUIRE(err.find("unknown successor") != std::string::npos);
  }
  SECTION("missing row") {
    std::string doc = mini_with_row("1");
    const std::string needle = ", \"b\": {\"b\": 1}";
    doc.replace(doc.find(needle), needle.size(), "");
    const std::string err = parse_failure(doc);
    REQUIRE(err.find("missing row for state 'b'") != std::string::npos);
  }
  SECTION("unsupported format tag") {
    std::string doc = kMini;
    doc.replace(doc.find("streett-model/1"), 15, "streett-model/9");
    const std::string err = parse_failure(doc);
    REQUIRE(err.find("$.format") != std::string::npos);
    REQUIRE(err.find("unsupported format") != std::string::npos);
  }
  SECTION("region outside the universe") {
    std::string doc = mini_with_row("1");
    doc.insert(doc.rfind('}'), R"(, "regions": {"R": ["z"]})");
    const std::string err = parse_failure(doc);
    REQUIRE(err.find("$.regions.R") != std::string::npos);
    REQUIRE(err.find("outside the chain universe") != std::string::npos);
  }
  SECTION("streett pair naming an unknown region") {
    std::string doc = mini_with_row("1");
    doc.insert(doc.rfind('}'), R"(, "streett": [{"fin": "X", "inf": "X"}])");
    const std::string err = parse_failure(doc);
    REQUIRE(err.find("$.streett[0].fin") != std::string::npos);
    REQUIRE(err.find("unknown region 'X'") != std::string::npos);
  }
  SECTION("syntax errors report line and column") {
    try {
      parse_model("{\n  \"format\": oops\n}");
      FAIL("expected a syntax error");
    } catch (const Error& e) {
      REQUIRE(e.kind() == "SyntaxError");
      REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SECTION("unknown builtin family") {
    const std::string doc =
        R"({"format": "streett-model/1", "chain": {"builtin": "nope", "params": {}}})";
    try {
      parse_model(doc);
      FAIL("expected an unknown-family error");
    } catch (const Error& e) {
      REQUIRE(e.kind() == "UnknownFamily");
    }
  }
}
