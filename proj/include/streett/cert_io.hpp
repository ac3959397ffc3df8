#pragma once
// JSON certificate documents and their binding against a parsed model.
// A document names its rule (quant-safety, qual-safety, decomposition,
// rule1, rule2) and describes regions and functions by reference:
//   region     ::= "Name" | "all" | "empty" | {"states": [...]}
//   value fn   ::= "p/q" | {"constant": x} | {"table": {state: x}, "default"?}
//                | {"builtin": name, "params"?} | {"scale": c, "of": vf}
//                | {"override": {state: x}, "of": vf}
//   ranking fn ::= same shapes with natural values
//   scalar fn  ::= "p/q" | {"constant": x} | {"builtin": name}
// Tables suit finite chains; builtins provide the closed forms needed on
// generated chains.  Optional per-document "window" and "r_grid" supply
// defaults that CLI flags may override.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "streett/certificates.hpp"
#include "streett/model_io.hpp"

namespace streett {

namespace detail {

template <class S>
Region<S> resolve_region(const Json& j, const Model<S>& m, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    auto it = m.regions.find(name);
    if (it != m.regions.end()) return it->second;
    if (name == "all") return region_all<S>();
    if (name == "empty") return region_empty<S>();
    vfail(path, "unknown region '" + name + "'");
  }
  if (j.is_object() && j.contains("states")) {
    std::vector<S> states = parse_state_list<S>(j["states"], path + ".states");
    for (const S& s : states) check_in_universe(m, s, path + ".states");
    return region_from_states<S>("inline", std::move(states));
  }
  vfail(path, "expected a region name or {\"states\": [...]}");
}

// Builtin evaluators are per state type; the generic case knows none.
template <class S>
ValueFunction<S> builtin_value(const std::string& name,
                               const std::map<std::string, Rational>& params,
                               const std::string& path) {
  (void)params;
  vfail(path, "unknown builtin value function '" + name + "' for this state type");
}

template <>
inline ValueFunction<std::int64_t> builtin_value<std::int64_t>(
    const std::string& name, const std::map<std::string, Rational>& params,
    const std::string& path) {
  if (name == "casino-v1") return casino_v1(require_param(params, "epsilon", name));
  if (name == "max-plus-one") return max_plus_one_value();
  vfail(path, "unknown builtin value function '" + name + "'");
}

template <class S>
RankingFunction<S> builtin_ranking(const std::string& name, const std::string& path) {
  vfail(path, "unknown builtin ranking function '" + name + "' for this state type");
}

template <>
inline RankingFunction<std::int64_t> builtin_ranking<std::int64_t>(const std::string& name,
                                                                   const std::string& path) {
  if (name == "max-plus-one") return max_plus_one_ranking();
  vfail(path, "unknown builtin ranking function '" + name + "'");
}

inline std::map<std::string, Rational> parse_params(const Json& j, const std::string& path) {
  std::map<std::string, Rational> params;
  if (!j.is_object()) vfail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    params[it.key()] = rat(it.value(), path + "." + it.key());
  return params;
}

template <class S>
ValueFunction<S> resolve_value(const Json& j, const Model<S>& m, const std::string& path) {
  if (j.is_string() || j.is_number_integer()) {
    const Rational c = rat(j, path);
    if (c < 0) vfail(path, "value functions are non-negative");
    return constant_value<S>("const", c);
  }
  if (!j.is_object()) vfail(path, "expected a value function");
  if (j.contains("constant")) {
    const Rational c = rat(j["constant"], path + ".constant");
    if (c < 0) vfail(path + ".constant", "value functions are non-negative");
    return constant_value<S>("const", c);
  }
  if (j.contains("table")) {
    const Json& jt = j["table"];
    if (!jt.is_object()) vfail(path + ".table", "expected an object");
    std::map<S, Rational> table;
    for (auto it = jt.begin(); it != jt.end(); ++it) {
      const std::string ep = path + ".table." + it.key();
      const S s = parse_state<S>(it.key(), ep);
      check_in_universe(m, s, ep);
      const Rational v = rat(it.value(), ep);
      if (v < 0) vfail(ep, "value functions are non-negative");
      table[s] = v;
    }
    std::optional<Rational> fallback;
    if (j.contains("default")) fallback = rat(j["default"], path + ".default");
    return table_value_function<S>("table", std::move(table), fallback);
  }
  if (j.contains("builtin")) {
    const std::string name = str(j["builtin"], path + ".builtin");
    std::map<std::string, Rational> params;
    if (j.contains("params")) params = parse_params(j["params"], path + ".params");
    return builtin_value<S>(name, params, path);
  }
  if (j.contains("scale")) {
    const Rational c = rat(j["scale"], path + ".scale");
    if (c < 0) vfail(path + ".scale", "scale must be non-negative");
    ValueFunction<S> inner = resolve_value(field(j, path, "of"), m, path + ".of");
    const auto fn = inner.value;
    return {inner.name + "*" + format_rational(c),
            [c, fn](const S& s) -> Rational { return c * fn(s); }};
  }
  if (j.contains("override")) {
    const Json& jo = j["override"];
    if (!jo.is_object()) vfail(path + ".override", "expected an object");
    auto table = std::make_shared<std::map<S, Rational>>();
    for (auto it = jo.begin(); it != jo.end(); ++it) {
      const std::string ep = path + ".override." + it.key();
      (*table)[parse_state<S>(it.key(), ep)] = rat(it.value(), ep);
    }
    ValueFunction<S> inner = resolve_value(field(j, path, "of"), m, path + ".of");
    const auto fn = inner.value;
    return {inner.name + "+override", [table, fn](const S& s) {
              auto it = table->find(s);
              return it == table->end() ? fn(s) : it->second;
            }};
  }
  vfail(path, "unrecognized value function shape");
}

template <class S>
RankingFunction<S> resolve_ranking(const Json& j, const Model<S>& m, const std::string& path) {
  if (j.is_number_integer()) {
    const std::uint64_t c = natural(j, path);
    return {"const", [c](const S&) { return c; }};
  }
  if (!j.is_object()) vfail(path, "expected a ranking function");
  if (j.contains("constant")) {
    const std::uint64_t c = natural(j["constant"], path + ".constant");
    return {"const", [c](const S&) { return c; }};
  }
  if (j.contains("table")) {
    const Json& jt = j["table"];
    if (!jt.is_object()) vfail(path + ".table", "expected an object");
    std::map<S, std::uint64_t> table;
    for (auto it = jt.begin(); it != jt.end(); ++it) {
      const std::string ep = path + ".table." + it.key();
      const S s = parse_state<S>(it.key(), ep);
      check_in_universe(m, s, ep);
      table[s] = natural(it.value(), ep);
    }
    std::optional<std::uint64_t> fallback;
    if (j.contains("default")) fallback = natural(j["default"], path + ".default");
    return table_ranking_function<S>("table", std::move(table), fallback);
  }
  if (j.contains("builtin"))
    return builtin_ranking<S>(str(j["builtin"], path + ".builtin"), path);
  if (j.contains("override")) {
    const Json& jo = j["override"];
    if (!jo.is_object()) vfail(path + ".override", "expected an object");
    auto table = std::make_shared<std::map<S, std::uint64_t>>();
    for (auto it = jo.begin(); it != jo.end(); ++it) {
      const std::string ep = path + ".override." + it.key();
      (*table)[parse_state<S>(it.key(), ep)] = natural(it.value(), ep);
    }
    RankingFunction<S> inner = resolve_ranking(field(j, path, "of"), m, path + ".of");
    const auto fn = inner.value;
    return {inner.name + "+override", [table, fn](const S& s) {
              auto it = table->find(s);
              return it == table->end() ? fn(s) : it->second;
            }};
  }
  vfail(path, "unrecognized ranking function shape");
}

inline MonotoneScalarFunction resolve_scalar(const Json& j, const std::string& path) {
  if (j.is_string() || j.is_number_integer())
    return constant_scalar("const", rat(j, path));
  if (!j.is_object()) vfail(path, "expected a scalar function");
  if (j.contains("constant"))
    return constant_scalar("const", rat(j["constant"], path + ".constant"));
  if (j.contains("builtin")) {
    const std::string name = str(j["builtin"], path + ".builtin");
    if (name == "min-1-r") return min_one_r();
    vfail(path + ".builtin", "unknown builtin scalar function '" + name + "'");
  }
  vfail(path, "unrecognized scalar function shape");
}

template <class S>
Window<S> resolve_window(const Json& j, const std::string& path) {
  if (j.is_object() && j.contains("states"))
    return window_from_states<S>(parse_state_list<S>(j["states"], path + ".states"));
  if constexpr (std::is_same_v<S, std::int64_t>) {
    if (j.is_object() && j.contains("lo") && j.contains("hi")) {
      if (!j["lo"].is_number_integer() || !j["hi"].is_number_integer())
        vfail(path, "window bounds must be integers");
      return window_range(j["lo"].get<std::int64_t>(), j["hi"].get<std::int64_t>());
    }
  }
  vfail(path, "expected {\"states\": [...]}"
              " or, for integer-state chains, {\"lo\": a, \"hi\": b}");
}

template <class S>
DecompositionWitness<S> resolve_witness(const Json& cert, const Model<S>& m) {
  DecompositionWitness<S> w;
  w.invariant = resolve_region(field(cert, "$", "invariant"), m, "$.invariant");
  const Json& ja = field(cert, "$", "absorbing");
  if (!ja.is_array()) vfail("$.absorbing", "expected an array of regions");
  for (std::size_t i = 0; i < ja.size(); ++i)
    w.absorbing.push_back(resolve_region(ja[i], m, "$.absorbing[" + std::to_string(i) + "]"));
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline Json parse_certificate(const std::string& text) {
  const Json cert = detail::parse_json(text);
  if (!cert.is_object()) detail::vfail("$", "expected an object");
  const std::string fmt = detail::str(detail::field(cert, "$", "format"), "$.format");
  if (fmt != "streett-cert/1")
    detail::vfail("$.format", "unsupported format '" + fmt + "' (expected streett-cert/1)");
  return cert;
}

// Binds the document against the model and runs the matching checker.
// Overrides beat document defaults for the window and the r grid.
template <class S>
CheckReport<S> run_certificate(const Model<S>& m, const Json& cert,
                               const std::optional<Window<S>>& window_override = std::nullopt,
                               const std::optional<std::vector<Rational>>& grid_override =
                                   std::nullopt,
                               bool approx = false, bool tight = false) {
  const std::string rule = detail::str(detail::field(cert, "$", "rule"), "$.rule");

  Window<S> window;
  if (window_override)
    window = *window_override;
  else if (cert.contains("window"))
    window = detail::resolve_window<S>(cert["window"], "$.window");

  CheckOptions opts;
  const bool doc_tight =
      cert.contains("tight") && cert["tight"].is_boolean() && cert["tight"].get<bool>();
  if (approx || doc_tight) opts = approx_check_options(tight || doc_tight);
  if (grid_override) {
    opts.r_grid = *grid_override;
  } else if (cert.contains("r_grid")) {
    const Json& jg = cert["r_grid"];
    if (!jg.is_array()) detail::vfail("$.r_grid", "expected an array");
    for (std::size_t i = 0; i < jg.size(); ++i)
      opts.r_grid.push_back(detail::rat(jg[i], "$.r_grid[" + std::to_string(i) + "]"));
  }

  if (rule == "quant-safety") {
    const Region<S> x = detail::resolve_region(detail::field(cert, "$", "region"), m, "$.region");
    const ValueFunction<S> v = detail::resolve_value(detail::field(cert, "$", "value"), m, "$.value");
    return check_quant_safety(m.chain, x, v, window, opts);
  }
  if (rule == "qual-safety") {
    const Region<S> a = detail::resolve_region(detail::field(cert, "$", "avoid"), m, "$.avoid");
    const Region<S> j = detail::resolve_region(detail::field(cert, "$", "absorb"), m, "$.absorb");
    const ValueFunction<S> v = detail::resolve_value(detail::field(cert, "$", "value"), m, "$.value");
    return check_qual_safety(m.chain, a, j, v, window, opts);
  }
  if (rule == "decomposition") {
    const DecompositionWitness<S> w = detail::resolve_witness(cert, m);
    return check_decomposition_semantic(m.chain, m.streett, w);
  }
  if (rule == "rule1") {
    Rule1Bundle<S> bundle;
    bundle.witness = detail::resolve_witness(cert, m);
    bundle.v0 = detail::resolve_value(detail::field(cert, "$", "v0"), m, "$.v0");
    const Json& jp = detail::field(cert, "$", "pairs");
    if (!jp.is_array()) detail::vfail("$.pairs", "expected an array");
    for (std::size_t i = 0; i < jp.size(); ++i) {
      const std::string pp = "$.pairs[" + std::to_string(i) + "]";
      Rule1Pair<S> pair;
      pair.v = detail::resolve_value(detail::field(jp[i], pp, "v"), m, pp + ".v");
      pair.w = detail::resolve_value(detail::field(jp[i], pp, "w"), m, pp + ".w");
      pair.u = detail::resolve_ranking(detail::field(jp[i], pp, "u"), m, pp + ".u");
      if (jp[i].contains("gamma")) pair.gamma = detail::rat(jp[i]["gamma"], pp + ".gamma");
      bundle.pairs.push_back(std::move(pair));
    }
    return check_rule1(m.chain, m.streett, bundle, window, opts);
  }
  if (rule == "rule2") {
    Rule2Bundle<S> bundle;
    bundle.witness = detail::resolve_witness(cert, m);
    bundle.v0 = detail::resolve_value(detail::field(cert, "$", "v0"), m, "$.v0");
    const Json& jp = detail::field(cert, "$", "pairs");
    if (!jp.is_array()) detail::vfail("$.pairs", "expected an array");
    for (std::size_t i = 0; i < jp.size(); ++i) {
      const std::string pp = "$.pairs[" + std::to_string(i) + "]";
      Rule2Pair<S> pair;
      pair.v = detail::resolve_value(detail::field(jp[i], pp, "v"), m, pp + ".v");
      pair.w = detail::resolve_value(detail::field(jp[i], pp, "w"), m, pp + ".w");
      pair.d = detail::resolve_scalar(detail::field(jp[i], pp, "d"), pp + ".d");
      pair.p = detail::resolve_scalar(detail::field(jp[i], pp, "p"), pp + ".p");
      if (jp[i].contains("gamma")) pair.gamma = detail::rat(jp[i]["gamma"], pp + ".gamma");
      bundle.pairs.push_back(std::move(pair));
    }
    return check_rule2(m.chain, m.streett, bundle, window, opts);
  }
  detail::vfail("$.rule", "unknown rule tag '" + rule + "'");
}

// ---------------------------------------------------------------------------
// Serialization of synthesized artifacts (finite chains, explicit tables).

namespace detail {

template <class S>
Json region_states_json(const MarkovChain<S>& chain, const Region<S>& r) {
  Json j;
  Json list = Json::array();
  for (const S& s : enumerate_region(chain, r)) list.push_back(state_to_string<S>(s));
  j["states"] = list;
  return j;
}

template <class S>
Json value_table_json(const MarkovChain<S>& chain, const ValueFunction<S>& v) {
  Json t;
  for (const S& s : universe_of(chain)) t[state_to_string<S>(s)] = format_rational(v.value(s));
  Json j;
  j["table"] = t;
  return j;
}

template <class S>
Json ranking_table_json(const MarkovChain<S>& chain, const RankingFunction<S>& u) {
  Json t;
  for (const S& s : universe_of(chain)) t[state_to_string<S>(s)] = u.value(s);
  Json j;
  j["table"] = t;
  return j;
}

// Distinct W values over the universe, so a replayed document carries the
// grid its progress and antitonicity conditions quantify over.
template <class S>
Json achieved_grid_json(const MarkovChain<S>& chain, const std::vector<ValueFunction<S>>& ws) {
  std::vector<Rational> values;
  for (const auto& w : ws)
    for (const S& s : universe_of(chain)) values.push_back(w.value(s));
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  Json grid = Json::array();
  for (const Rational& r : values) grid.push_back(format_rational(r));
  return grid;
}

}  // namespace detail

template <class S>
Json decomposition_to_json(const MarkovChain<S>& chain, const DecompositionWitness<S>& w) {
  Json j;
  j["format"] = "streett-cert/1";
  j["rule"] = "decomposition";
  j["invariant"] = detail::region_states_json(chain, w.invariant);
  Json ja = Json::array();
  for (const auto& r : w.absorbing) ja.push_back(detail::region_states_json(chain, r));
  j["absorbing"] = ja;
  return j;
}

template <class S>
Json rule1_to_json(const MarkovChain<S>& chain, const Rule1Bundle<S>& b) {
  Json j;
  j["format"] = "streett-cert/1";
  j["rule"] = "rule1";
  j["invariant"] = detail::region_states_json(chain, b.witness.invariant);
  Json ja = Json::array();
  for (const auto& r : b.witness.absorbing) ja.push_back(detail::region_states_json(chain, r));
  j["absorbing"] = ja;
  j["v0"] = detail::value_table_json(chain, b.v0);
  Json jp = Json::array();
  std::vector<ValueFunction<S>> ws;
  for (const auto& pair : b.pairs) {
    Json e;
    e["v"] = detail::value_table_json(chain, pair.v);
    e["w"] = detail::value_table_json(chain, pair.w);
    e["u"] = detail::ranking_table_json(chain, pair.u);
    if (pair.gamma) e["gamma"] = format_rational(*pair.gamma);
    jp.push_back(e);
    ws.push_back(pair.w);
  }
  j["pairs"] = jp;
  j["r_grid"] = detail::achieved_grid_json(chain, ws);
  return j;
}

// Runs a certificate against a parsed model of either state type.  The CLI
// window override is an integer range and only applies to integer-state
// chains; on string-state chains pass a state list inside the document.
struct CertRunOutcome {
  Verdict verdict = Verdict::Pass;
  std::string text;
  std::string json;
};

struct WindowRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

inline CertRunOutcome run_certificate_any(
    const ParsedModel& pm, const std::string& cert_text,
    const std::optional<WindowRange>& window = std::nullopt,
    const std::optional<std::vector<Rational>>& grid = std::nullopt, bool approx = false,
    bool tight = false) {
  const Json cert = parse_certificate(cert_text);
  CertRunOutcome out;
  std::visit(
      [&](const auto& m) {
        using S = typename std::decay_t<decltype(m)>::state_type;
        std::optional<Window<S>> w;
        if (window) {
          if constexpr (std::is_same_v<S, std::int64_t>) {
            w = window_range(window->lo, window->hi);
          } else {
            fail("ValidationError",
                 "--window ranges require an integer-state chain; "
                 "use a window state list in the certificate document");
          }
        }
        const CheckReport<S> report = run_certificate<S>(m, cert, w, grid, approx, tight);
        out.verdict = report.verdict;
        out.text = report_to_text(report);
        out.json = report_to_json(report).dump(2) + "\n";
      },
      pm.model);
  return out;
}

// Synthesized scalar functions are constant; they serialize as their value at
// r = 1.
template <class S>
Json rule2_to_json(const MarkovChain<S>& chain, const Rule2Bundle<S>& b) {
  Json j;
  j["format"] = "streett-cert/1";
  j["rule"] = "rule2";
  j["invariant"] = detail::region_states_json(chain, b.witness.invariant);
  Json ja = Json::array();
  for (const auto& r : b.witness.absorbing) ja.push_back(detail::region_states_json(chain, r));
  j["absorbing"] = ja;
  j["v0"] = detail::value_table_json(chain, b.v0);
  Json jp = Json::array();
  std::vector<ValueFunction<S>> ws;
  for (const auto& pair : b.pairs) {
    Json e;
    e["v"] = detail::value_table_json(chain, pair.v);
    e["w"] = detail::value_table_json(chain, pair.w);
    e["d"] = Json{{"constant", format_rational(pair.d.value(Rational(1)))}};
    e["p"] = Json{{"constant", format_rational(pair.p.value(Rational(1)))}};
    if (pair.gamma) e["gamma"] = format_rational(*pair.gamma);
    jp.push_back(e);
    ws.push_back(pair.w);
  }
  j["pairs"] = jp;
  j["r_grid"] = detail::achieved_grid_json(chain, ws);
  return j;
}

}  // namespace streett
