#pragma once
// Command-line front end.  Subcommands orchestrate the library modules:
//   solve       oracle Streett acceptance probability of a model document
//   check       run a certificate document against a model document
//   synthesize  derive decomposition or proof-rule certificates (finite chains)
//   product     expand a model + automaton document into a product model
//   simulate    seeded Monte Carlo series for a builtin family, CSV output
//   bound       two-sided truncation interval for a reachability probability
// Exit codes: 0 pass/success, 1 certificate Fail, 2 usage or input errors.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "streett/cert_io.hpp"
#include "streett/simulation.hpp"
#include "streett/synthesis.hpp"
#include "streett/truncation.hpp"

namespace streett {

namespace detail {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("IoError", "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("IoError", "cannot write '" + path + "'");
  out << text;
  if (!out) fail("IoError", "cannot write '" + path + "'");
}

inline std::int64_t parse_int64_arg(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(text, &pos);
    if (pos != text.size()) fail("ValidationError", what + ": expected an integer, got '" + text + "'");
    return static_cast<std::int64_t>(v);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail("ValidationError", what + ": expected an integer, got '" + text + "'");
  }
}

// "a..b" with either bound possibly negative.
inline WindowRange parse_window_arg(const std::string& text) {
  const std::size_t dots = text.find("..", 1);
  if (dots == std::string::npos)
    fail("ValidationError", "--window: expected 'a..b', got '" + text + "'");
  WindowRange r;
  r.lo = parse_int64_arg(text.substr(0, dots), "--window");
  r.hi = parse_int64_arg(text.substr(dots + 2), "--window");
  if (r.lo > r.hi) fail("ValidationError", "--window: empty range '" + text + "'");
  return r;
}

// Either an inclusive integer range "a..b" or a comma list of rationals.
inline std::vector<Rational> parse_grid_arg(const std::string& text) {
  std::vector<Rational> grid;
  const std::size_t dots = text.find("..", 1);
  if (dots != std::string::npos && text.find(',') == std::string::npos) {
    const std::int64_t lo = parse_int64_arg(text.substr(0, dots), "--r-grid");
    const std::int64_t hi = parse_int64_arg(text.substr(dots + 2), "--r-grid");
    if (lo > hi) fail("ValidationError", "--r-grid: empty range '" + text + "'");
    for (std::int64_t r = lo; r <= hi; ++r) grid.push_back(Rational(r));
    return grid;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    if (item.empty()) fail("ValidationError", "--r-grid: empty entry in '" + text + "'");
    grid.push_back(parse_rational(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (grid.empty()) fail("ValidationError", "--r-grid: no entries in '" + text + "'");
  return grid;
}

inline std::map<std::string, Rational> parse_param_args(const std::vector<std::string>& items) {
  std::map<std::string, Rational> params;
  for (const std::string& item : items) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      fail("ValidationError", "--param: expected 'name=p/q', got '" + item + "'");
    params[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
  }
  return params;
}

// Positional that is either a model document path or a builtin family name.
inline AnyModel load_family_or_model(const std::string& arg,
                                     const std::vector<std::string>& param_args,
                                     std::optional<Dsa>* automaton = nullptr) {
  std::ifstream probe(arg);
  if (probe.good()) {
    probe.close();
    ParsedModel pm = parse_model(read_text_file(arg));
    if (automaton) *automaton = pm.automaton;
    return std::move(pm.model);
  }
  return builtin(arg, parse_param_args(param_args));
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int run_solve(const std::string& model_path, std::ostream& out) {
  const ParsedModel pm = parse_model(detail::read_text_file(model_path));
  std::visit(
      [&](const auto& m) {
        out << format_rational(streett_probability(m.chain, m.streett)) << "\n";
      },
      pm.model);
  return 0;
}

inline int run_check(const std::string& model_path, const std::string& cert_path,
                     const std::optional<WindowRange>& window,
                     const std::optional<std::vector<Rational>>& grid, bool approx, bool tight,
                     bool as_json, std::ostream& out) {
  const ParsedModel pm = parse_model(detail::read_text_file(model_path));
  const CertRunOutcome outcome = run_certificate_any(
      pm, detail::read_text_file(cert_path), window, grid, approx, tight);
  out << (as_json ? outcome.json : outcome.text);
  return outcome.verdict == Verdict::Fail ? 1 : 0;
}

inline int run_synthesize(const std::string& model_path, const std::string& rule,
                          const Rational& threshold, const std::optional<std::uint64_t>& k,
                          const std::optional<std::string>& out_path, std::ostream& out,
                          std::ostream& err) {
  if (k && rule != "decomposition") {
    err << "error: --k applies only to --rule decomposition\n";
    return 2;
  }
  const ParsedModel pm = parse_model(detail::read_text_file(model_path));
  std::string text;
  std::visit(
      [&](const auto& m) {
        Json doc;
        if (rule == "decomposition") {
          const auto w = k ? synthesize_decomposition_k(m.chain, m.streett, *k, threshold)
                           : synthesize_decomposition(m.chain, m.streett, threshold);
          doc = decomposition_to_json(m.chain, w);
        } else if (rule == "rule1") {
          doc = rule1_to_json(m.chain, synthesize_rule1_bundle(m.chain, m.streett, threshold));
        } else {
          doc = rule2_to_json(m.chain, synthesize_rule2_bundle(m.chain, m.streett, threshold));
        }
        text = doc.dump(2) + "\n";
      },
      pm.model);
  if (out_path)
    detail::write_text_file(*out_path, text);
  else
    out << text;
  return 0;
}

inline int run_product(const std::string& model_path, const std::string& out_path) {
  const ParsedModel pm = parse_model(detail::read_text_file(model_path));
  if (!pm.automaton)
    fail("ValidationError", "model document has no automaton section to take a product with");
  std::visit(
      [&](const auto& m) {
        using S = typename std::decay_t<decltype(m)>::state_type;
        const ProductResult<S> res = product(m.chain, *pm.automaton);
        Model<ProductState<S>> pmodel;
        pmodel.chain = res.chain;
        pmodel.streett = res.cond;
        for (const auto& pair : res.cond.pairs) {
          pmodel.regions[pair.fin.name] = pair.fin;
          pmodel.regions[pair.inf.name] = pair.inf;
        }
        detail::write_text_file(out_path, model_to_json(pmodel).dump(2) + "\n");
      },
      pm.model);
  return 0;
}

inline int run_simulate(const std::string& family, const std::vector<std::string>& param_args,
                        std::uint64_t steps, std::uint64_t trajectories, std::uint64_t seed,
                        std::uint64_t stride, const std::string& out_path) {
  const std::map<std::string, Rational> params = detail::parse_param_args(param_args);
  if (family != "lending-casino")
    fail("UnknownFamily",
         "simulate supports the lending-casino family (statistic: casino-v1 return probability)");
  const AnyModel any = builtin(family, params);
  const auto& m = std::get<Model<std::int64_t>>(any);
  const auto statistic = casino_v1_stat(require_param(params, "epsilon", family));
  SimulationSeries<std::int64_t> series =
      simulate_return_probability(m.chain, statistic, steps, trajectories, seed, stride);
  series.params = params;
  std::ofstream csv(out_path, std::ios::binary);
  if (!csv) fail("IoError", "cannot write '" + out_path + "'");
  write_csv(series, csv);
  return 0;
}

inline int run_bound(const std::string& family_or_model,
                     const std::vector<std::string>& param_args, const std::string& target_name,
                     const WindowRange& window, const std::optional<std::string>& from_arg,
                     std::ostream& out) {
  const AnyModel any = detail::load_family_or_model(family_or_model, param_args);
  std::visit(
      [&](const auto& m) {
        using S = typename std::decay_t<decltype(m)>::state_type;
        auto it = m.regions.find(target_name);
        if (it == m.regions.end())
          fail("ValidationError", "--target: unknown region '" + target_name + "'");
        if constexpr (std::is_same_v<S, std::int64_t>) {
          std::vector<S> states;
          for (std::int64_t s = window.lo; s <= window.hi; ++s) states.push_back(s);
          Distribution<S> from = m.chain.initial;
          if (from_arg) from = dirac(detail::parse_int64_arg(*from_arg, "--from"));
          const ProbabilityInterval iv = bounded_reach_interval(m.chain, it->second, states, from);
          out << "lower " << format_rational(iv.lower) << "\n";
          out << "upper " << format_rational(iv.upper) << "\n";
          out << "width " << format_rational(iv.upper - iv.lower) << "\n";
        } else {
          fail("ValidationError", "bound expects an integer-state chain for --window ranges");
        }
      },
      any);
  return 0;
}

// ---------------------------------------------------------------------------

inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                        std::ostream& err) {
  CLI::App app{"Streett-property model checking and certificate checking on Markov chains"};
  app.name("streett");
  app.require_subcommand(1);

  std::string model_path, cert_path, out_path, window_arg, grid_arg, from_arg, target_name;
  std::string rule = "decomposition";
  std::string threshold_arg = "1/2";
  std::vector<std::string> param_args;
  std::uint64_t steps = 0, trajectories = 0, seed = 0, stride = 100, k_value = 0;
  bool approx = false, tight = false, as_json = false;

  CLI::App* solve = app.add_subcommand("solve", "Print the exact Streett acceptance probability");
  solve->add_option("model", model_path, "model document (JSON)")->required();

  CLI::App* check = app.add_subcommand("check", "Check a certificate document against a model");
  check->add_option("model", model_path, "model document (JSON)")->required();
  check->add_option("cert", cert_path, "certificate document (JSON)")->required();
  check->add_option("--window", window_arg, "verification window a..b (integer states)");
  check->add_option("--r-grid", grid_arg, "progress grid: a..b or comma list of rationals");
  check->add_flag("--approx", approx, "tolerance-based comparisons instead of exact");
  check->add_flag("--tight", tight, "with --approx, allow tolerance slack on inequalities");
  check->add_flag("--json", as_json, "emit the machine-readable report");

  CLI::App* synth = app.add_subcommand("synthesize", "Derive certificates from a finite model");
  synth->add_option("model", model_path, "model document (JSON)")->required();
  synth->add_option("--rule", rule, "decomposition | rule1 | rule2")
      ->check(CLI::IsMember({"decomposition", "rule1", "rule2"}));
  synth->add_option("--threshold", threshold_arg, "return-probability threshold p/q in (0,1)");
  CLI::Option* k_opt = synth->add_option("--k", k_value, "invariant level: keep states with per-state probability >= 1/(k+1)");
  synth->add_option("--out", out_path, "write the certificate document here instead of stdout");

  CLI::App* prod = app.add_subcommand("product", "Expand model + automaton into a product model");
  prod->add_option("model", model_path, "model document with an automaton section")->required();
  prod->add_option("out", out_path, "output path for the expanded model document")->required();

  std::string family;
  CLI::App* sim = app.add_subcommand("simulate", "Sample seeded trajectories, write CSV series");
  sim->add_option("family", family, "builtin family (lending-casino)")->required();
  sim->add_option("--param", param_args, "family parameter name=p/q (repeatable)");
  sim->add_option("--steps", steps, "steps per trajectory")->required();
  sim->add_option("--trajectories", trajectories, "number of trajectories")->required();
  sim->add_option("--seed", seed, "RNG seed (required: all randomness is explicit)")->required();
  sim->add_option("--stride", stride, "recording stride in steps");
  sim->add_option("--out", out_path, "CSV output path")->required();

  CLI::App* bnd = app.add_subcommand("bound", "Two-sided truncation bracket for reachability");
  bnd->add_option("family", family, "builtin family name or model document path")->required();
  bnd->add_option("--param", param_args, "family parameter name=p/q (repeatable)");
  bnd->add_option("--target", target_name, "target region name")->required();
  bnd->add_option("--window", window_arg, "truncation window a..b")->required();
  bnd->add_option("--from", from_arg, "start state (default: the model's initial distribution)");

  std::vector<const char*> argv;
  argv.push_back("streett");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return run_solve(model_path, out);
    if (check->parsed()) {
      std::optional<WindowRange> window;
      if (check->count("--window") > 0) window = detail::parse_window_arg(window_arg);
      std::optional<std::vector<Rational>> grid;
      if (check->count("--r-grid") > 0) grid = detail::parse_grid_arg(grid_arg);
      return run_check(model_path, cert_path, window, grid, approx, tight, as_json, out);
    }
    if (synth->parsed()) {
      std::optional<std::uint64_t> k;
      if (k_opt->count() > 0) k = k_value;
      std::optional<std::string> out_file;
      if (synth->count("--out") > 0) out_file = out_path;
      return run_synthesize(model_path, rule, parse_rational(threshold_arg), k, out_file, out,
                            err);
    }
    if (prod->parsed()) return run_product(model_path, out_path);
    if (sim->parsed())
      return run_simulate(family, param_args, steps, trajectories, seed, stride, out_path);
    if (bnd->parsed()) {
      std::optional<std::string> from;
      if (bnd->count("--from") > 0) from = from_arg;
      return run_bound(family, param_args, target_name, detail::parse_window_arg(window_arg),
                       from, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand selected\n";
  return 2;
}

}  // namespace streett
