#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "odetree/cli.hpp"
#include "odetree/config.hpp"
#include "odetree/reference_solutions.hpp"

using namespace odetree;

namespace {

const char* kMonomialConfig = R"(
# monomial benchmark
problem.kind = monomial
problem.n = 2
problem.x0 = 1
density.kind = exponential
density.lambda = 0.5
solve.t = 0.02, 0.05
solve.n_samples = 4000
solve.seed = 42
solve.butcher_order = 5
certify.T = 0.1
certify.q = 1
)";

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  Config cfg = Config::parse_string(kMonomialConfig);
  CHECK(cfg.get_string("problem.kind") == "monomial");
  CHECK(cfg.get_double("density.lambda") == doctest::Approx(0.5));
  CHECK(cfg.get_list("solve.t") == std::vector<double>{0.02, 0.05});
  CHECK(cfg.get_int("solve.n_samples") == 4000);
  CHECK(cfg.get_int("solve.node_cap", 77) == 77);

  CHECK_THROWS_WITH_AS(Config::parse_string("bogus.key = 1"),
                       doctest::Contains("bogus.key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      Config::parse_string("problem.kind = a\nproblem.kind = b"),
      doctest::Contains("duplicate"), std::runtime_error);
  CHECK_THROWS_AS(Config::parse_string("problem.n = xyz").get_int("problem.n"),
                  std::runtime_error);
}

TEST_CASE("solve emits a stable csv with the closed form") {
  Config cfg = Config::parse_string(kMonomialConfig);
  CliOptions opt;
  std::ostringstream out, log;
  int rc = cmd_solve(cfg, opt, out, log);
  CHECK(rc == 0);
  auto rows = lines_of(out.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "t,mc_mean,mc_stderr,closed_form,rk4,butcher_series_order5,n_rejected");
  // closed-form column carries the analytic solution at 17 digits
  char expect[64];
  std::snprintf(expect, sizeof expect, "%.17g", monomial_solution(2, 1.0, 0.02));
  CHECK(rows[1].find(expect) != std::string::npos);
}

TEST_CASE("solve output is identical across reruns and worker counts") {
  Config cfg = Config::parse_string(kMonomialConfig);
  std::ostringstream a, b, c, log;
  CliOptions one;
  one.workers = 1;
  CliOptions four;
  four.workers = 4;
  CHECK(cmd_solve(cfg, one, a, log) == 0);
  CHECK(cmd_solve(cfg, four, b, log) == 0);
  CHECK(cmd_solve(cfg, four, c, log) == 0);
  CHECK(a.str() == b.str());
  CHECK(b.str() == c.str());
}

TEST_CASE("vector-valued problems join components with semicolons") {
  Config cfg = Config::parse_string(R"(
problem.kind = linear2
problem.a11 = 0
problem.a12 = 1
problem.a21 = -1
problem.a22 = 0
problem.x0 = 1
problem.x0_2 = 0.5
density.kind = exponential
density.lambda = 0.5
solve.t = 0.02
solve.n_samples = 2000
solve.seed = 9
)");
  std::ostringstream out, log;
  CHECK(cmd_solve(cfg, CliOptions{}, out, log) == 0);
  auto rows = lines_of(out.str());
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].find(';') != std::string::npos);
}

TEST_CASE("solve rejects a bad sample count") {
  Config cfg = Config::parse_string(kMonomialConfig);
  cfg.set("solve.n_samples", "0");
  std::ostringstream out, log;
  CHECK(cmd_solve(cfg, CliOptions{}, out, log) == 2);
  CHECK(log.str().find("n_samples") != std::string::npos);
}

TEST_CASE("certify report for the monomial example") {
  Config cfg = Config::parse_string(kMonomialConfig);
  std::ostringstream out, log;
  int rc = cmd_certify(cfg, CliOptions{}, out, log);
  CHECK(rc == 0);  // the bounded-marks route certifies this configuration
  std::string r = out.str();
  CHECK(r.find("integrability_I = PASS") != std::string::npos);
  CHECK(r.find("uniform_I = PASS") != std::string::npos);
  CHECK(r.find("T_max = 0.010498904") != std::string::npos);
  CHECK(r.find("lambda0(") != std::string::npos);
  CHECK(r.find("certified = yes") != std::string::npos);

  // lambda0 line sits inside (3/2, e)
  auto pos = r.find("lambda0(");
  auto eq = r.find(") = ", pos);
  double l0 = std::stod(r.substr(eq + 4));
  CHECK(l0 > 1.5);
  CHECK(l0 < std::exp(1.0));
}

TEST_CASE("certify report for the exponential example") {
  Config cfg = Config::parse_string(R"(
problem.kind = exponential
problem.x0 = 1
density.kind = exponential
density.lambda = 0.5
certify.T = 0.01
certify.q = 1
)");
  std::ostringstream out, log;
  int rc = cmd_certify(cfg, CliOptions{}, out, log);
  CHECK(rc == 0);
  CHECK(out.str().find("T_max = 0.012323631") != std::string::npos);
}

TEST_CASE("uncertifiable configuration exits nonzero unless warn-only") {
  Config cfg = Config::parse_string(R"(
problem.kind = monomial
problem.n = 2
problem.x0 = 1
density.kind = exponential
density.lambda = 1
certify.T = 0.9
certify.q = 1
)");
  std::ostringstream out, log;
  CHECK(cmd_certify(cfg, CliOptions{}, out, log) == 1);
  CliOptions warn;
  warn.warn_only = true;
  std::ostringstream out2, log2;
  CHECK(cmd_certify(cfg, warn, out2, log2) == 0);
}

TEST_CASE("progeny subcommand produces the histogram and verdicts") {
  Config cfg = Config::parse_string(R"(
density.kind = exponential
density.lambda = 1
progeny.lambda = 1
progeny.t = 0.6931471805599453
progeny.n_samples = 20000
progeny.j = 2
)");
  std::ostringstream out, log;
  int rc = cmd_progeny(cfg, CliOptions{}, out, log);
  CHECK(rc == 0);
  auto rows = lines_of(out.str());
  REQUIRE(rows.size() > 3);
  CHECK(rows[0] == "m,empirical_pmf,analytic_pmf");
  // even counts carry zero analytic mass
  CHECK(rows[1].substr(0, 2) == "0,");
  CHECK(rows[1].substr(rows[1].rfind(',') + 1) == "0");
  CHECK(log.str().find("tv_distance") != std::string::npos);
  CHECK(log.str().find("dominance PASS") != std::string::npos);
  CHECK(log.str().find("marked_progeny") != std::string::npos);
}

TEST_CASE("butcher-check subcommand") {
  Config cfg = Config::parse_string(R"(
problem.kind = monomial
problem.n = 2
problem.x0 = 1
density.kind = exponential
density.lambda = 1
butcher.n_samples = 400
butcher.t = 0.8
butcher.max_order = 6
)");
  std::ostringstream out, log;
  int rc = cmd_butcher_check(cfg, CliOptions{}, out, log);
  CHECK(rc == 0);
  std::string r = out.str();
  CHECK(r.find("order 3: 2 trees") != std::string::npos);
  CHECK(r.find("order 6: 20 trees") != std::string::npos);
  CHECK(r.find("invariant_violations = 0") != std::string::npos);
  CHECK(log.str().find("butcher check PASS") != std::string::npos);
}

TEST_CASE("seed flag overrides the config seed") {
  Config cfg = Config::parse_string(kMonomialConfig);
  std::ostringstream a, b, c, log;
  CHECK(cmd_solve(cfg, CliOptions{}, a, log) == 0);
  CliOptions other;
  other.seed = 43;
  CHECK(cmd_solve(cfg, other, b, log) == 0);
  CHECK(a.str() != b.str());
  CliOptions same;
  same.seed = 42;  // equal to the config value
  CHECK(cmd_solve(cfg, same, c, log) == 0);
  CHECK(a.str() == c.str());
}

TEST_CASE("cli dispatch reports config errors") {
  std::ostringstream console, errors;
  int rc = run_cli("solve", "/nonexistent/path.conf", CliOptions{}, console,
                   errors);
  CHECK(rc == 2);
  CHECK(errors.str().find("error") != std::string::npos);
}
