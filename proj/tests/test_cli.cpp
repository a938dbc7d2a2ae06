#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "doctest.h"
#include "usp/cli.hpp"

using namespace usp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(bool(is));
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string tmp_path(const std::string& name) {
  return std::string("cli_test_") + name;
}

const char* kMinimal = R"(
[equation]
rhs = sin(x) * y
)";

}  // namespace

TEST_CASE("parse_config accepts a minimal problem file") {
  RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.problem.equation == EquationKind::Poisson);
  CHECK(cfg.problem.rhs(0.5, 2.0) == doctest::Approx(std::sin(0.5) * 2.0));
  CHECK(cfg.problem.solver == SolverChoice::Adi);
  CHECK(cfg.problem.tolerance == 1e-12);
  CHECK(cfg.coeff_path.empty());
}

TEST_CASE("parse_config reports a missing robin theta by its full key") {
  std::string text = std::string(kMinimal) + "[bc.top]\nkind = robin\n";
  try {
    parse_config(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bc.top.theta") != std::string::npos);
  }
}

TEST_CASE("parse_config explains how to enable the factored solver") {
  std::string text = std::string(kMinimal) + "[solver]\nmethod = fadi\n";
  try {
    parse_config(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("factor_rhs") != std::string::npos);
  }
}

TEST_CASE("parse_config rejects unknown keys and malformed input") {
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[solver]\nmethods = adi\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[equation]\ntypo = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("rhs = 1\n"), ParseError);       // key outside a section
  CHECK_THROWS_AS(parse_config("[equation\nrhs = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[equation]\nrhs 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[equation]\nrhs = sin(\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[equation]\nkind = heat\nrhs = 1\n"), ParseError);
}

TEST_CASE("run writes byte-identical outputs across repeated runs") {
  RunConfig cfg = parse_config(kMinimal);
  cfg.grid_size = 21;
  CliOptions opts;
  opts.quiet = true;

  std::string c1 = tmp_path("c1.csv"), g1 = tmp_path("g1.csv"), r1 = tmp_path("r1.json");
  std::string c2 = tmp_path("c2.csv"), g2 = tmp_path("g2.csv"), r2 = tmp_path("r2.json");
  cfg.coeff_path = c1;
  cfg.grid_path = g1;
  cfg.report_path = r1;
  CHECK(run(cfg, opts) == 0);
  cfg.coeff_path = c2;
  cfg.grid_path = g2;
  cfg.report_path = r2;
  CHECK(run(cfg, opts) == 0);

  CHECK(slurp(c1) == slurp(c2));
  CHECK(slurp(g1) == slurp(g2));
  // Reports carry wall times, so compare everything but the timing fields.
  nlohmann::json j1 = nlohmann::json::parse(slurp(r1));
  nlohmann::json j2 = nlohmann::json::parse(slurp(r2));
  for (nlohmann::json* j : {&j1, &j2})
    for (auto& lv : (*j)["levels"]) lv.erase("wall_time");
  CHECK(j1 == j2);
  for (const std::string& p : {c1, g1, r1, c2, g2, r2}) std::remove(p.c_str());
}

TEST_CASE("run report lists every refinement level exactly once") {
  RunConfig cfg = parse_config(R"(
[equation]
rhs = sin(6 * x * y)

[solver]
tolerance = 1e-10
)");
  std::string rp = tmp_path("report.json");
  cfg.report_path = rp;
  CliOptions opts;
  opts.quiet = true;
  CHECK(run(cfg, opts) == 0);

  nlohmann::json rep = nlohmann::json::parse(slurp(rp));
  CHECK(rep["tolerance"] == 1e-10);
  REQUIRE(rep["levels"].is_array());
  REQUIRE(rep["levels"].size() >= 2);  // needs more than n = 16 to resolve
  std::set<int> seen;
  int expect = 16;
  for (const auto& lv : rep["levels"]) {
    int n = lv["n"];
    CHECK(n == expect);
    CHECK(seen.insert(n).second);
    CHECK(lv["iterations"].get<int>() > 0);
    CHECK(lv["increments"].is_array());
    expect *= 2;
  }
  CHECK(rep["levels"].back()["resolved"] == true);
  CHECK(rep["final_n"] == rep["levels"].back()["n"]);
  std::remove(rp.c_str());
}
