#pragma once
// JSON model documents.  A document carries either an explicit finite chain
// (states, initial distribution, transition rows) or a builtin family
// reference, plus labels, named regions, a Streett section, and an optional
// automaton.  Rationals are written as "p/q" strings or JSON integers so
// fixtures stay exact.  Every parse failure is a SyntaxError with line and
// column or a ValidationError naming the offending document path.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "streett/automaton.hpp"
#include "streett/builtins.hpp"

namespace streett {

using Json = nlohmann::json;

struct ParsedModel {
  AnyModel model;
  std::optional<Dsa> automaton;
};

namespace detail {

[[noreturn]] inline void vfail(const std::string& path, const std::string& msg) {
  fail("ValidationError", path + ": " + msg);
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = e.byte > 0 ? e.byte - 1 : 0;
    for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail("SyntaxError",
         "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

inline const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) vfail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) vfail(path, "missing field '" + std::string(key) + "'");
  return *it;
}

inline std::string str(const Json& j, const std::string& path) {
  if (!j.is_string()) vfail(path, "expected a string");
  return j.get<std::string>();
}

inline Rational rat(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (!j.is_string()) vfail(path, "expected an integer or a 'p/q' string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    vfail(path, e.what());
  }
}

inline std::uint64_t natural(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) vfail(path, "expected a natural number");
  return j.get<std::uint64_t>();
}

template <class S>
S parse_state(const std::string& text, const std::string& path) {
  try {
    return state_from_string<S>(text);
  } catch (const Error& e) {
    vfail(path, e.what());
  }
}

template <class S>
std::vector<S> parse_state_list(const Json& j, const std::string& path) {
  if (!j.is_array()) vfail(path, "expected an array of states");
  std::vector<S> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_state<S>(str(j[i], path + "[" + std::to_string(i) + "]"),
                                 path + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::string> parse_string_list(const Json& j, const std::string& path) {
  if (!j.is_array()) vfail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(str(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

// ---------------------------------------------------------------------------
// Automaton section.

inline Dsa parse_dsa(const Json& j, const std::string& path) {
  Dsa d;
  d.states = parse_string_list(field(j, path, "states"), path + ".states");
  d.initial = str(field(j, path, "initial"), path + ".initial");
  d.alphabet = parse_string_list(field(j, path, "alphabet"), path + ".alphabet");
  const Json& jt = field(j, path, "transitions");
  if (!jt.is_array()) vfail(path + ".transitions", "expected an array");
  for (std::size_t i = 0; i < jt.size(); ++i) {
    const std::string tp = path + ".transitions[" + std::to_string(i) + "]";
    const std::string from = str(field(jt[i], tp, "from"), tp + ".from");
    const std::string to = str(field(jt[i], tp, "to"), tp + ".to");
    const auto letter_list = parse_string_list(field(jt[i], tp, "letter"), tp + ".letter");
    const std::set<std::string> letter(letter_list.begin(), letter_list.end());
    const auto key = std::make_pair(from, letter_key(letter));
    if (d.transitions.count(key)) vfail(tp, "duplicate transition");
    d.transitions[key] = to;
  }
  if (j.contains("acceptance")) {
    const Json& ja = j["acceptance"];
    if (!ja.is_array()) vfail(path + ".acceptance", "expected an array");
    for (std::size_t i = 0; i < ja.size(); ++i) {
      const std::string ap = path + ".acceptance[" + std::to_string(i) + "]";
      const auto f = parse_string_list(field(ja[i], ap, "fin"), ap + ".fin");
      const auto g = parse_string_list(field(ja[i], ap, "inf"), ap + ".inf");
      d.acceptance.push_back({{f.begin(), f.end()}, {g.begin(), g.end()}});
    }
  }
  validate_dsa(d);
  return d;
}

inline std::vector<std::string> split_letter_key(const std::string& key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= key.size() && !key.empty()) {
    const std::size_t cut = key.find(',', start);
    if (cut == std::string::npos) {
      out.push_back(key.substr(start));
      break;
    }
    out.push_back(key.substr(start, cut - start));
    start = cut + 1;
  }
  return out;
}

inline Json dsa_to_json(const Dsa& d) {
  Json j;
  j["states"] = d.states;
  j["initial"] = d.initial;
  j["alphabet"] = d.alphabet;
  Json jt = Json::array();
  for (const auto& [key, to] : d.transitions) {
    Json e;
    e["from"] = key.first;
    e["letter"] = split_letter_key(key.second);
    e["to"] = to;
    jt.push_back(e);
  }
  j["transitions"] = jt;
  Json ja = Json::array();
  for (const auto& [f, g] : d.acceptance) {
    Json e;
    e["fin"] = std::vector<std::string>(f.begin(), f.end());
    e["inf"] = std::vector<std::string>(g.begin(), g.end());
    ja.push_back(e);
  }
  j["acceptance"] = ja;
  return j;
}

// ---------------------------------------------------------------------------
// Explicit chain section.

inline Model<std::string> parse_explicit(const Json& jc) {
  const std::string base = "$.chain";
  const Json& jstates = field(jc, base, "states");
  const std::vector<std::string> listed = parse_string_list(jstates, base + ".states");
  if (listed.empty()) vfail(base + ".states", "expected at least one state");
  std::set<std::string> uniq(listed.begin(), listed.end());
  if (uniq.size() != listed.size()) vfail(base + ".states", "duplicate state");

  // Transition rows: one per state, each summing to exactly 1.
  const Json& jrows = field(jc, base, "rows");
  if (!jrows.is_object()) vfail(base + ".rows", "expected an object");
  auto rows = std::make_shared<std::map<std::string, Distribution<std::string>>>();
  for (auto it = jrows.begin(); it != jrows.end(); ++it) {
    const std::string rp = base + ".rows." + it.key();
    if (!uniq.count(it.key())) vfail(rp, "row for unknown state");
    if (!it.value().is_object()) vfail(rp, "expected an object of successors");
    std::vector<std::pair<std::string, Rational>> entries;
    Rational sum(0);
    for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
      const std::string ep = rp + "." + jt.key();
      if (!uniq.count(jt.key())) vfail(ep, "unknown successor state");
      const Rational p = rat(jt.value(), ep);
      if (!(p > 0 && p <= 1)) vfail(ep, "probability " + format_rational(p) + " outside (0,1]");
      entries.emplace_back(jt.key(), p);
      sum += p;
    }
    if (sum != 1) vfail(rp, "row sums to " + format_rational(sum));
    (*rows)[it.key()] = make_distribution<std::string>(std::move(entries));
  }
  for (const std::string& s : listed)
    if (!rows->count(s)) vfail(base + ".rows", "missing row for state '" + s + "'");

  const Json& ji = field(jc, base, "initial");
  Distribution<std::string> initial;
  if (ji.is_string()) {
    const std::string s = ji.get<std::string>();
    if (!uniq.count(s)) vfail(base + ".initial", "unknown state '" + s + "'");
    initial = dirac<std::string>(s);
  } else if (ji.is_object()) {
    std::vector<std::pair<std::string, Rational>> entries;
    Rational sum(0);
    for (auto it = ji.begin(); it != ji.end(); ++it) {
      const std::string ip = base + ".initial." + it.key();
      if (!uniq.count(it.key())) vfail(ip, "unknown state");
      const Rational p = rat(it.value(), ip);
      if (!(p > 0 && p <= 1)) vfail(ip, "probability " + format_rational(p) + " outside (0,1]");
      entries.emplace_back(it.key(), p);
      sum += p;
    }
    if (sum != 1) vfail(base + ".initial", "initial mass sums to " + format_rational(sum));
    initial = make_distribution<std::string>(std::move(entries));
  } else {
    vfail(base + ".initial", "expected a state name or a distribution object");
  }

  Model<std::string> m;
  m.chain.initial = std::move(initial);
  m.chain.kernel = [rows](const std::string& s) {
    auto it = rows->find(s);
    if (it == rows->end()) fail("StateOutsideUniverse", "no transition row for '" + s + "'");
    return it->second;
  };
  std::vector<std::string> universe = listed;
  std::sort(universe.begin(), universe.end());
  m.chain.universe = std::move(universe);
  m.chain.labels = [](const std::string&) { return std::set<std::string>{}; };
  return m;
}

// ---------------------------------------------------------------------------
// Top-level sections shared by explicit and builtin chains.

template <class S>
void check_in_universe(const Model<S>& m, const S& s, const std::string& path) {
  if (!m.chain.universe) return;
  if (!std::binary_search(m.chain.universe->begin(), m.chain.universe->end(), s))
    vfail(path, "state " + state_to_string<S>(s) + " outside the chain universe");
}

template <class S>
void apply_document_sections(Model<S>& m, const Json& root, bool explicit_chain) {
  if (root.contains("labels")) {
    if (!explicit_chain) vfail("$.labels", "labels are fixed for builtin families");
    const Json& jl = root["labels"];
    if (!jl.is_object()) vfail("$.labels", "expected an object");
    auto table = std::make_shared<std::map<S, std::set<std::string>>>();
    for (auto it = jl.begin(); it != jl.end(); ++it) {
      const std::string lp = "$.labels." + it.key();
      const S s = parse_state<S>(it.key(), lp);
      check_in_universe(m, s, lp);
      const auto props = parse_string_list(it.value(), lp);
      (*table)[s] = std::set<std::string>(props.begin(), props.end());
    }
    m.chain.labels = [table](const S& s) {
      auto it = table->find(s);
      return it == table->end() ? std::set<std::string>{} : it->second;
    };
  }
  if (root.contains("regions")) {
    const Json& jr = root["regions"];
    if (!jr.is_object()) vfail("$.regions", "expected an object");
    for (auto it = jr.begin(); it != jr.end(); ++it) {
      const std::string rp = "$.regions." + it.key();
      if (m.regions.count(it.key())) vfail(rp, "region name already defined by the family");
      std::vector<S> states = parse_state_list<S>(it.value(), rp);
      for (const S& s : states) check_in_universe(m, s, rp);
      m.regions[it.key()] = region_from_states<S>(it.key(), std::move(states));
    }
  }
  if (root.contains("streett")) {
    const Json& js = root["streett"];
    if (!js.is_array()) vfail("$.streett", "expected an array of pairs");
    StreettCondition<S> cond;
    for (std::size_t i = 0; i < js.size(); ++i) {
      const std::string sp = "$.streett[" + std::to_string(i) + "]";
      const std::string fin = str(field(js[i], sp, "fin"), sp + ".fin");
      const std::string inf = str(field(js[i], sp, "inf"), sp + ".inf");
      auto fit = m.regions.find(fin);
      if (fit == m.regions.end()) vfail(sp + ".fin", "unknown region '" + fin + "'");
      auto iit = m.regions.find(inf);
      if (iit == m.regions.end()) vfail(sp + ".inf", "unknown region '" + inf + "'");
      cond.pairs.push_back({fit->second, iit->second});
    }
    m.streett = std::move(cond);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline ParsedModel parse_model(const std::string& text) {
  const Json root = detail::parse_json(text);
  if (!root.is_object()) detail::vfail("$", "expected an object");
  const std::string fmt = detail::str(detail::field(root, "$", "format"), "$.format");
  if (fmt != "streett-model/1")
    detail::vfail("$.format", "unsupported format '" + fmt + "' (expected streett-model/1)");
  const Json& jc = detail::field(root, "$", "chain");
  if (!jc.is_object()) detail::vfail("$.chain", "expected an object");

  ParsedModel pm;
  if (jc.contains("builtin")) {
    const std::string name = detail::str(jc["builtin"], "$.chain.builtin");
    std::map<std::string, Rational> params;
    if (jc.contains("params")) {
      const Json& jp = jc["params"];
      if (!jp.is_object()) detail::vfail("$.chain.params", "expected an object");
      for (auto it = jp.begin(); it != jp.end(); ++it)
        params[it.key()] = detail::rat(it.value(), "$.chain.params." + it.key());
    }
    pm.model = builtin(name, params);
    std::visit([&](auto& m) { detail::apply_document_sections(m, root, false); }, pm.model);
  } else {
    Model<std::string> m = detail::parse_explicit(jc);
    detail::apply_document_sections(m, root, true);
    pm.model = std::move(m);
  }
  if (root.contains("automaton"))
    pm.automaton = detail::parse_dsa(root["automaton"], "$.automaton");
  return pm;
}

// Builtin-backed models serialize as the family reference; everything else as
// a fully explicit document keyed by the state codec's strings.
template <class S>
Json model_to_json(const Model<S>& m, const std::optional<Dsa>& automaton = std::nullopt) {
  Json j;
  j["format"] = "streett-model/1";
  if (!m.chain.family.empty()) {
    Json jc;
    jc["builtin"] = m.chain.family;
    if (!m.params.empty()) {
      Json jp;
      for (const auto& [k, v] : m.params) jp[k] = format_rational(v);
      jc["params"] = jp;
    }
    j["chain"] = jc;
  } else {
    const std::vector<S>& universe = universe_of(m.chain);
    Json jc;
    Json jstates = Json::array();
    for (const S& s : universe) jstates.push_back(state_to_string<S>(s));
    jc["states"] = jstates;
    Json ji;
    for (const auto& [s, p] : m.chain.initial.support)
      ji[state_to_string<S>(s)] = format_rational(p);
    jc["initial"] = ji;
    Json jrows;
    for (const S& s : universe) {
      Json row;
      for (const auto& [u, p] : m.chain.kernel(s).support)
        row[state_to_string<S>(u)] = format_rational(p);
      jrows[state_to_string<S>(s)] = row;
    }
    jc["rows"] = jrows;
    j["chain"] = jc;

    if (m.chain.labels) {
      Json jl;
      for (const S& s : universe) {
        const std::set<std::string> props = m.chain.labels(s);
        if (!props.empty()) jl[state_to_string<S>(s)] = std::vector<std::string>(props.begin(), props.end());
      }
      if (!jl.empty()) j["labels"] = jl;
    }

    // Named regions, including any referenced only through the Streett pairs.
    std::map<std::string, std::vector<S>> named;
    for (const auto& [name, region] : m.regions) named[name] = enumerate_region(m.chain, region);
    Json jstreett = Json::array();
    int anon = 0;
    for (const auto& pair : m.streett.pairs) {
      auto ensure = [&](const Region<S>& r) {
        std::string name = r.name.empty() ? "region" + std::to_string(++anon) : r.name;
        if (!named.count(name)) named[name] = enumerate_region(m.chain, r);
        return name;
      };
      Json e;
      e["fin"] = ensure(pair.fin);
      e["inf"] = ensure(pair.inf);
      jstreett.push_back(e);
    }
    if (!named.empty()) {
      Json jr;
      for (const auto& [name, states] : named) {
        Json list = Json::array();
        for (const S& s : states) list.push_back(state_to_string<S>(s));
        jr[name] = list;
      }
      j["regions"] = jr;
    }
    j["streett"] = jstreett;
  }
  if (automaton) j["automaton"] = detail::dsa_to_json(*automaton);
  return j;
}

inline std::string serialize_model(const ParsedModel& pm) {
  return std::visit(
      [&](const auto& m) { return model_to_json(m, pm.automaton).dump(2) + "\n"; }, pm.model);
}

}  // namespace streett
