#include <doctest.h>

#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "problem_file.hpp"

using namespace coiso;

namespace {

std::string data(const std::string& name) {
  std::ifstream in(std::string(COISO_TEST_DATA_DIR) + "/" + name);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_message(std::string_view text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("cli_io") {

TEST_CASE("problem files") {
  ProblemFile pf = parse_problem(R"(
# pre-cosymplectic model with a chosen Reeb field
chart (t, q, p, z1, z2)
kind = precosymplectic
eta = dt
omega = dq^dp
P = { z1: -3*dt,
      z2: 0 }
reeb = dt + 3*dz1
grid = lattice(-1..1 : 2)
ell = 1
offsection_box = 0.5
offsection_steps = 2
)");
  REQUIRE(pf.spec);
  CHECK(pf.spec->family == Family::Cosymplectic);
  CHECK_FALSE(pf.spec->nondegenerate);
  REQUIRE(pf.projector);
  CHECK(pf.projector->vertical() == std::vector<int>{3, 4});
  CHECK(pf.projector->correction(0, 0) == parse_scalar("3", pf.chart));
  REQUIRE(pf.reeb.size() == 1);
  CHECK(pf.reeb[0].label == "R");
  CHECK(pf.grid->points.size() == 32);
  CHECK(pf.ell == 1);
  CHECK(pf.offsection_box == make_rational(1, 2));
  CHECK(pf.offsection_steps == 2);
}

TEST_CASE("indexed forms and defaults") {
  ProblemFile pf = parse_problem("chart (t1, t2, q, p1, p2, z)\nkind = k-precosymplectic\neta1 = dt1\neta2 = dt2\n"
                                 "omega1 = dq^dp1\nomega2 = dq^dp2\n");
  CHECK(pf.spec->k() == 2);
  CHECK(pf.grid_or_default().points.size() == 729);
  ProblemFile m = parse_problem("chart (q, p, z, mu)\nkind = symplectic\nomega = dq^dp + dmu^dz\n");
  CHECK(m.fiber_or_default() == std::vector<int>{3});
}

TEST_CASE("diagnostics carry line numbers") {
  CHECK(error_message("chart (q, p)\nkind = presymplectic\nomega = dq^^dp\n").find("line 3, column 12") == 0);
  CHECK(error_message("chart (q, p)\nchart (a, b)\n").find("line 2") == 0);
  CHECK(error_message("chart (q, p)\nkind = presymplectic\nomega = dq^dp\nomega = dq^dp\n").find("duplicate") !=
        std::string::npos);
  CHECK(error_message("chart (q, p)\ncolour = red\n").find("unknown key") != std::string::npos);
  CHECK(error_message("chart (q, p)\nkind = presymplectic\nomega = dq\n").find("line 3 (omega)") == 0);
  CHECK(error_message("kind = presymplectic\n").find("chart") != std::string::npos);
  CHECK(error_message("chart (q, p, z)\nP = { z: dz }\n").find("line 2") == 0);
  CHECK(error_message("chart (q, p, z)\nP = { z: dq\n").find("unclosed") != std::string::npos);
}

TEST_CASE("exact decimals") {
  CHECK(parse_decimal("0.1") == make_rational(1, 10));
  CHECK(parse_decimal("-2.5e-1") == make_rational(-1, 4));
  CHECK(parse_decimal("3") == 3);
  CHECK(parse_decimal("1/10") == make_rational(1, 10));
  CHECK(parse_decimal("1e2") == 100);
  CHECK_THROWS_AS(parse_decimal("abc"), Error);
}

TEST_CASE("check reports") {
  CommandResult ok = cmd_check(data("precontact.chart"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.report["schema"] == "coiso-report/1");
  CHECK(ok.report["dim_v"] == 2);
  CHECK(ok.report.find("timing_ms") == ok.report.end());
  for (const auto& v : ok.report["verdicts"]) CHECK(v.contains("certified"));

  CommandResult jump = cmd_check("chart (q, p)\nkind = presymplectic\nomega = q*dq^dp\n");
  CHECK(jump.exit_code == 1);
  CHECK(jump.report["constant_rank"] == false);

  CommandResult bad = cmd_check("chart (q, p)\nkind = presymplectic\nomega = dq^^dp\n");
  CHECK(bad.exit_code == 2);
  CHECK(bad.report["error"]["code"] == "SyntaxError");

  CommandOptions timed;
  timed.timing = true;
  CHECK(cmd_check(data("precontact.chart"), timed).report.contains("timing_ms"));
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  set_thread_override(1);
  const std::string a = cmd_thicken(data("k_precontact.chart")).report.dump();
  set_thread_override(4);
  const std::string b = cmd_thicken(data("k_precontact.chart")).report.dump();
  set_thread_override(0);
  CHECK(a == b);
  CHECK(cmd_check(data("presymplectic.chart")).report.dump() == cmd_check(data("presymplectic.chart")).report.dump());
  CHECK(cmd_check(data("presymplectic.chart")).report["input_digest"] !=
        cmd_check(data("precontact.chart")).report["input_digest"]);
}

TEST_CASE("thicken output round-trips") {
  for (const char* name : {"presymplectic.chart", "precosymplectic.chart", "precontact.chart", "precocontact.chart",
                           "k_presymplectic.chart", "k_precosymplectic.chart", "k_precontact.chart",
                           "premultisymplectic.chart"}) {
    CAPTURE(name);
    CommandResult t = cmd_thicken(data(name));
    CHECK(t.exit_code == 0);
    REQUIRE_FALSE(t.artifact.empty());
    ProblemFile out = parse_problem(t.artifact);
    CHECK(out.spec->nondegenerate);
    CommandResult c = cmd_check(t.artifact);
    CHECK(c.exit_code == 0);
    CHECK(c.report["dim_v"] == 0);
    CHECK(c.report["kind"] == t.report["kind_out"]);
  }
  CommandResult mismatch = cmd_thicken("chart (q, p, z)\nkind = presymplectic\nomega = dq^dp\nP = { p: 0 }\n");
  CHECK(mismatch.exit_code == 2);
  CHECK(mismatch.report["error"]["code"] == "VerticalMismatch");
}

TEST_CASE("nijenhuis command") {
  CommandResult r = cmd_nijenhuis(data("pq_projector.chart"));
  CHECK(r.exit_code == 1);
  REQUIRE(r.report["coefficients"].size() == 1);
  CHECK(r.report["coefficients"][0]["value"] == "-q");
  CHECK(r.report["coefficients"][0]["a"] == "q");
  CHECK(r.report["coefficients"][0]["b"] == "p");
  CommandResult flat = cmd_nijenhuis("chart (q, p, z)\nP = { z: -q*dq }\n");
  CHECK(flat.exit_code == 0);
  CHECK(flat.report["coefficients"].empty());
  CHECK(cmd_nijenhuis(data("presymplectic.chart")).exit_code == 2);
}

TEST_CASE("reeb command") {
  const std::string base = "chart (t, q, p, z1, z2)\nkind = precosymplectic\neta = dt\nomega = dq^dp\n";
  CommandResult r = cmd_reeb(base + "reeb = dt + 3*dz1\n");
  CHECK(r.exit_code == 0);
  CHECK(r.report["reeb_projector"] == "P = { z1: -3*dt, z2: 0 }");
  CHECK(r.report["points"][0]["families"][0]["free_functions"] == 2);
  CommandResult wrong = cmd_reeb(base + "reeb = 2*dt\n");
  CHECK(wrong.exit_code == 1);
  CHECK(cmd_reeb(data("presymplectic.chart")).exit_code == 2);
  // The emitted projector thickens to a Reeb field extending R.
  CommandResult t = cmd_thicken(base + "P = { z1: -3*dt, z2: 0 }\nreeb = dt + 3*dz1\n");
  CHECK(t.exit_code == 0);
}

TEST_CASE("moser command") {
  CommandOptions o;
  o.samples = 4;
  o.steps = 200;
  CommandResult r = cmd_moser(data("golden_1.chart"), data("golden_2.chart"), o);
  CHECK(r.exit_code == 0);
  CHECK(r.report["primitive"] == "mu^2*dq");
  CHECK(r.report["samples"].size() == 4);
  CHECK(r.report["samples"][0]["aborted_at_t"].is_null());
  CommandResult torus = cmd_moser(data("torus_1.chart"), data("torus_2.chart"), o);
  CHECK(torus.exit_code == 1);
  CHECK(torus.report["reeb_proportionality"]["all_proportional"] == false);
  CHECK(cmd_moser(data("golden_1.chart"), data("torus_1.chart"), o).exit_code == 2);
}

TEST_CASE("write_problem round-trips") {
  ProblemFile pf = parse_problem(data("precocontact.chart"));
  const std::string text = write_problem(*pf.spec, pf.grid->description, {"copy"});
  ProblemFile back = parse_problem(text);
  CHECK(back.spec->xi == pf.spec->xi);
  CHECK(back.spec->etas == pf.spec->etas);
  CHECK(back.grid->points.size() == pf.grid->points.size());
}

}
