// End-to-end CLI runs against the bundled fixtures: output values, exit
// codes, document round-trips through synthesize/product, and the seeded
// simulation contract.

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct CliResult {
  int code;
  std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(STREETT_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  for (;;) {
    const std::size_t got = fread(buf, 1, sizeof buf, pipe);
    if (got == 0) break;
    output.append(buf, got);
  }
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, output};
}

std::string fx(const std::string& name) {
  return std::string(STREETT_SOURCE_DIR "/fixtures/") + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve prints exact acceptance probabilities") {
  REQUIRE(run_cli("solve " + fx("fig2.json")).output == "1\n");
  REQUIRE(run_cli("solve " + fx("fig3.json")).output == "2/3\n");
  REQUIRE(run_cli("solve " + fx("fig5.json")).output == "2/3\n");
  REQUIRE(run_cli("solve " + fx("fig2.json")).code == 0);
}

TEST_CASE("solve rejects chains without a finite universe") {
  const CliResult r = run_cli("solve " + fx("casino.json"));
  REQUIRE(r.code == 2);
  REQUIRE(r.output.find("error:") != std::string::npos);
  REQUIRE(r.output.find("finite universe") != std::string::npos);
}

TEST_CASE("check exit codes follow the verdict") {
  const CliResult pass = run_cli("check " + fx("fig3.json") + " " + fx("fig3-quant.json"));
  REQUIRE(pass.code == 0);
  REQUIRE(pass.output.find("verdict: Pass") != std::string::npos);
  REQUIRE(pass.output.find("bound: 2/3") != std::string::npos);

  const CliResult fail = run_cli("check " + fx("fig3.json") + " " + fx("fig3-quant-bad.json"));
  REQUIRE(fail.code == 1);
  REQUIRE(fail.output.find("verdict: Fail") != std::string::npos);
  REQUIRE(fail.output.find("[FAIL] Thm4.1/Eq.61 witness s0: 1/3 vs 1/4") != std::string::npos);

  const CliResult windowed = run_cli("check " + fx("casino.json") + " " + fx("casino-qual.json"));
  REQUIRE(windowed.code == 0);
  REQUIRE(windowed.output.find("verdict: PassOnWindow") != std::string::npos);
  REQUIRE(windowed.output.find("bound: 1/3") != std::string::npos);
}

TEST_CASE("check emits a machine-readable report on request") {
  const CliResult r =
      run_cli("check " + fx("casino.json") + " " + fx("casino-rule1.json") + " --json");
  REQUIRE(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  REQUIRE(j.at("verdict") == "PassOnWindow");
  REQUIRE(j.at("bound") == "1");
  bool saw_progress = false;
  for (const auto& c : j.at("conditions"))
    if (c.at("id") == "Rule1/Eq.73") {
      saw_progress = true;
      REQUIRE(c.at("verdict") == "Pass");
      REQUIRE(c.at("value") == "1/2");
    }
  REQUIRE(saw_progress);
}

TEST_CASE("window overrides narrow or reject as appropriate") {
  const CliResult narrowed = run_cli("check " + fx("casino.json") + " " +
                                     fx("casino-rule1.json") + " --window -10..10");
  REQUIRE(narrowed.code == 0);
  REQUIRE(narrowed.output.find("PassOnWindow") != std::string::npos);

  const CliResult strings = run_cli("check " + fx("fig3.json") + " " + fx("fig3-quant.json") +
                                    " --window 0..5");
  REQUIRE(strings.code == 2);
  REQUIRE(strings.output.find("error:") != std::string::npos);

  const CliResult empty = run_cli("check " + fx("casino.json") + " " + fx("casino-rule1.json") +
                                  " --window 5..1");
  REQUIRE(empty.code == 2);
  REQUIRE(empty.output.find("empty range") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
  REQUIRE(run_cli("").code == 2);
  REQUIRE(run_cli("frobnicate").code == 2);
  REQUIRE(run_cli("check " + fx("fig3.json")).code == 2);  // missing certificate
  const CliResult k_misuse =
      run_cli("synthesize " + fx("fig3.json") + " --rule rule1 --k 2");
  REQUIRE(k_misuse.code == 2);
  REQUIRE(k_misuse.output.find("--k applies only") != std::string::npos);
}

TEST_CASE("synthesized certificates replay through check") {
  SECTION("decomposition at the sublevel invariant recovers 2/3") {
    REQUIRE(run_cli("synthesize " + fx("fig3.json") +
                    " --rule decomposition --k 1 --out cli-tmp-dec.json")
                .code == 0);
    const CliResult r = run_cli("check " + fx("fig3.json") + " cli-tmp-dec.json");
    REQUIRE(r.code == 0);
    REQUIRE(r.output.find("verdict: Pass") != std::string::npos);
    REQUIRE(r.output.find("bound: 2/3") != std::string::npos);
  }
  SECTION("rule1 on fig2 passes with bound 1") {
    REQUIRE(run_cli("synthesize " + fx("fig2.json") + " --rule rule1 --out cli-tmp-r1.json")
                .code == 0);
    const CliResult r = run_cli("check " + fx("fig2.json") + " cli-tmp-r1.json");
    REQUIRE(r.code == 0);
    REQUIRE(r.output.find("verdict: Pass") != std::string::npos);
    REQUIRE(r.output.find("bound: 1") != std::string::npos);
  }
  SECTION("rule2 documents print to stdout when no output path is given") {
    const CliResult r = run_cli("synthesize " + fx("fig2.json") + " --rule rule2");
    REQUIRE(r.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.output);
    REQUIRE(doc.at("format") == "streett-cert/1");
    REQUIRE(doc.at("rule") == "rule2");
  }
}

TEST_CASE("product expansion preserves the acceptance probability") {
  REQUIRE(run_cli("product " + fx("product-debt.json") + " cli-tmp-prod.json").code == 0);
  REQUIRE(run_cli("solve cli-tmp-prod.json").output == "92/173\n");

  const CliResult no_dsa = run_cli("product " + fx("fig2.json") + " cli-tmp-prod2.json");
  REQUIRE(no_dsa.code == 2);
  REQUIRE(no_dsa.output.find("no automaton section") != std::string::npos);
}

TEST_CASE("simulate writes a deterministic seeded CSV series") {
  const std::string args =
      "simulate lending-casino --param epsilon=1/10 --steps 500 --trajectories 3 --seed 42 "
      "--stride 100 --out ";
  REQUIRE(run_cli(args + "cli-tmp-sim1.csv").code == 0);
  REQUIRE(run_cli(args + "cli-tmp-sim2.csv").code == 0);
  const std::string csv = read_file("cli-tmp-sim1.csv");
  REQUIRE(csv == read_file("cli-tmp-sim2.csv"));
  REQUIRE(csv.rfind("trajectory,n,state,statistic\n", 0) == 0);
  // per trajectory: n = 0, 100, 200, 300, 400, 500
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  REQUIRE(lines == 1 + 3 * 6);

  const CliResult unseeded = run_cli(
      "simulate lending-casino --param epsilon=1/10 --steps 10 --trajectories 1 --out x.csv");
  REQUIRE(unseeded.code == 2);  // all randomness is explicit
}

TEST_CASE("bound prints the two-sided truncation bracket") {
  const CliResult r = run_cli(
      "bound lending-casino --param epsilon=1/5 --target Solvency --window -2..1 --from -1");
  REQUIRE(r.code == 0);
  REQUIRE(r.output == "lower 10/19\nupper 1\nwidth 9/19\n");
}
