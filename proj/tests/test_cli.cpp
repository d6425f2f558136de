#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

std::string temp_path(const std::string& stem) {
  static int counter = 0;
  return "/tmp/etaxi_" + stem + "_" + std::to_string(::getpid()) + "_" +
         std::to_string(counter++);
}

// Runs the tool with a clean default-config environment and captures stdout.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string capture = temp_path("out");
  std::string cmd = "env -u ETAXI_CONFIG " + env + (env.empty() ? "" : " ") + "\"" ETAXI_CLI_BIN
                    "\" " + args + " > " + capture + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream f(capture);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  std::remove(capture.c_str());
  return r;
}

std::string write_file(const std::string& stem, const std::string& content) {
  std::string path = temp_path(stem);
  std::ofstream f(path);
  f << content;
  return path;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("verify subcommand exit codes") {
  CHECK(run_cli("verify virasoro --max-index 3 --level 10").code == 0);
  CHECK(run_cli("verify dq --symbolic --max-index 2 --level 8").code == 0);

  auto small = run_cli("verify virasoro --level 1");
  CHECK(small.code == 2);
  CHECK(contains(small.out, "window-empty"));

  // The cross-rule comparison against the dropped zero pair differs on the
  // weighted families, so this suite reports a mismatch.
  auto conv = run_cli("verify convention-independence --level 8");
  CHECK(conv.code == 1);
  CHECK(contains(conv.out, "\"status\": \"fail\""));

  CHECK(run_cli("verify virasoro --sector R --level 4").code == 2);
  CHECK(run_cli("verify no-such-suite").code == 2);
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("verify report payload") {
  auto r = run_cli("verify virasoro --max-index 2 --level 6");
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "\"suite\": \"virasoro\""));
  CHECK(contains(r.out, "\"status\": \"pass\""));
  CHECK(contains(r.out, "\"failures\": []"));

  auto alpha = run_cli("verify virasoro-alpha --max-index 2 --level 6");
  REQUIRE(alpha.code == 0);
  CHECK(contains(alpha.out, "\"central_charge_quadratic\": \"-2 + 6*alpha - 3*alpha^2\""));
  CHECK(contains(alpha.out, "\"anomaly_free_alpha\": \"1\""));

  auto text = run_cli("verify virasoro --max-index 2 --level 6 --format text");
  REQUIRE(text.code == 0);
  CHECK(contains(text.out, "suite: virasoro\nstatus: pass\n"));
}

TEST_CASE("character subcommand examples") {
  auto iom = run_cli("character iom --L 4 --vars 2");
  CHECK(iom.code == 0);
  CHECK(contains(iom.out, "\"match\": true"));

  auto d0t = run_cli("character d0t --t 3/2 --L 3");
  CHECK(d0t.code == 0);
  CHECK(contains(d0t.out, "\"match\": true"));

  auto trivial = run_cli("character general --L 0");
  CHECK(trivial.code == 0);
  CHECK(contains(trivial.out, "\"trace_str\": \"1\""));
  CHECK(contains(trivial.out, "\"product_str\": \"1\""));

  auto w3 = run_cli("character w3 --L 2");
  CHECK(w3.code == 0);
  CHECK(contains(w3.out, "\"vars\": 3"));
  CHECK(contains(w3.out, "\"match\": true"));
}

TEST_CASE("character payload details") {
  auto d0t = run_cli("character d0t --t 2 --L 1");
  REQUIRE(d0t.code == 0);
  CHECK(contains(d0t.out, "\"continuum_exponent\": \"2/3\""));

  auto text = run_cli("character general --L 0 --format text");
  REQUIRE(text.code == 0);
  CHECK(contains(text.out, "trace: 1\n"));
  CHECK(contains(text.out, "match: true\n"));

  auto d0k = run_cli("character d0k --hbar-order 2 --L 2");
  CHECK(d0k.code == 0);
  CHECK(contains(d0k.out, "\"match\": true"));

  // Too few tracked variables for the requested expansion order.
  CHECK(run_cli("character d0k --hbar-order 2 --vars 2 --L 2").code == 2);
  CHECK(run_cli("character d0k --hbar-order 2 --vars 4 --L 2").code == 0);
}

TEST_CASE("csv is restricted to single-variable data") {
  CHECK(run_cli("verify virasoro --level 6 --format csv").code == 2);
  CHECK(run_cli("character general --L 2 --vars 2 --format csv").code == 2);

  auto single = run_cli("character general --L 1 --vars 1 --format csv");
  REQUIRE(single.code == 0);
  CHECK(single.out == "exponent,trace,product\n-1,1,1\n0,2,2\n1,1,1\n");

  auto d0t = run_cli("character d0t --t 2 --L 1 --format csv");
  REQUIRE(d0t.code == 0);
  CHECK(d0t.out == "exponent,trace,product\n-2,1,1\n-15/8,1,1\n0,1,1\n1/8,1,1\n");

  auto d0k = run_cli("character d0k --hbar-order 1 --L 1 --format csv");
  REQUIRE(d0k.code == 0);
  CHECK(d0k.out == "exponent,substituted,trace\n-4,1,1\n-3,1,1\n-1,1,1\n0,1,1\n");
}

TEST_CASE("eigenvalue tables") {
  auto iom = run_cli("table iom-eigenvalues --level 3 --vars 2 --format csv");
  REQUIRE(iom.code == 0);
  CHECK(contains(iom.out, "diagram,level,charge,I_0,I_1,I_2\n"));
  CHECK(contains(iom.out, "({}|{}),0,0,0,0,0\n"));
  CHECK(contains(iom.out, "({1}|{2}),3,0,0,3,-3\n"));
  CHECK(contains(iom.out, "\"({2,1}|{})\",3,2,2,3,5\n"));

  auto d0 = run_cli("table d0-eigenvalues --level 3 --format csv");
  REQUIRE(d0.code == 0);
  CHECK(contains(d0.out, "diagram,level,charge,D0_q\n"));
  CHECK(contains(d0.out, "({}|{}),0,0,0\n"));
  CHECK(contains(d0.out, "({1}|{2}),3,0,q^-3 - q^3\n"));

  auto ram = run_cli("table d0-eigenvalues --sector R --level 2 --format csv");
  REQUIRE(ram.code == 0);
  CHECK(contains(ram.out, "({1/2}|{}),1/2,1,q^-2\n"));

  auto shifts = run_cli("table shifts --vars 4 --format csv");
  REQUIRE(shifts.code == 0);
  CHECK(shifts.out == "i,NS,R\n1,-1/12,1/24\n3,1/120,-7/960\n");

  auto shifts6 = run_cli("table shifts --vars 6 --format csv");
  REQUIRE(shifts6.code == 0);
  CHECK(contains(shifts6.out, "5,-1/252,"));
}

TEST_CASE("output is byte-identical across reruns") {
  std::string cmds[] = {
      "verify virasoro --max-index 2 --level 6",
      "character iom --L 3 --vars 2",
      "table iom-eigenvalues --level 4 --vars 3",
  };
  for (const auto& c : cmds) {
    auto a = run_cli(c);
    auto b = run_cli(c);
    REQUIRE(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("out flag writes the same payload to a file") {
  auto direct = run_cli("character d0t --t 3/2 --L 2");
  REQUIRE(direct.code == 0);
  std::string path = temp_path("payload");
  auto filed = run_cli("character d0t --t 3/2 --L 2 --out " + path);
  REQUIRE(filed.code == 0);
  CHECK(filed.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("config file with command-line override") {
  std::string cfg = write_file("cfg", "# comment line\n\nlevel=1\nformat = json\n");
  auto blocked = run_cli("verify virasoro", "ETAXI_CONFIG=" + cfg);
  CHECK(blocked.code == 2);
  CHECK(contains(blocked.out, "window-empty"));

  auto overridden = run_cli("verify virasoro --max-index 2 --level 6", "ETAXI_CONFIG=" + cfg);
  CHECK(overridden.code == 0);

  std::string textcfg = write_file("cfg_text", "format=text\nL=0\n");
  auto text = run_cli("character general", "ETAXI_CONFIG=" + textcfg);
  CHECK(text.code == 0);
  CHECK(contains(text.out, "trace: 1\n"));

  std::string bad = write_file("cfg_bad", "bogus=3\n");
  CHECK(run_cli("verify virasoro --level 6", "ETAXI_CONFIG=" + bad).code == 2);
  CHECK(run_cli("verify virasoro --level 6", "ETAXI_CONFIG=/tmp/etaxi_missing_cfg").code == 2);

  std::string rational = write_file("cfg_rat", "t=5/3\nL=2\n");
  auto viat = run_cli("character d0t", "ETAXI_CONFIG=" + rational);
  CHECK(viat.code == 0);
  CHECK(contains(viat.out, "\"t\": \"5/3\""));

  std::remove(cfg.c_str());
  std::remove(textcfg.c_str());
  std::remove(bad.c_str());
  std::remove(rational.c_str());
}

TEST_CASE("config validation bounds") {
  CHECK(run_cli("verify virasoro --level 99").code == 2);
  CHECK(run_cli("character general --L 13").code == 2);
  CHECK(run_cli("character general --vars 0 --L 1").code == 2);
  CHECK(run_cli("verify dq --ring bogus --level 6").code == 2);
  CHECK(run_cli("table shifts --format yaml").code == 2);
}
