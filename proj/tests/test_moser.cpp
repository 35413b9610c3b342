#include <doctest.h>

#include "errors.hpp"
#include "moser.hpp"
#include "support/random_forms.hpp"

using namespace coiso;

namespace {

GeometrySpec cosymplectic(const ChartPtr& c, const std::string& eta, const std::string& omega) {
  GeometrySpec s;
  s.family = Family::Cosymplectic;
  s.nondegenerate = true;
  s.chart = c;
  s.etas.push_back(parse_form(eta, c, 1));
  s.omegas.push_back(parse_form(omega, c, 2));
  return s;
}

}  // namespace

TEST_SUITE("moser") {

TEST_CASE("homotopy primitive examples") {
  ChartPtr c = make_chart("c", {"q", "p", "z", "mu"});
  const std::vector<int> fib = {3};
  CHECK(fiber_homotopy_primitive(parse_form("dmu^dz", c), fib).theta == parse_form("mu*dz", c));
  CHECK(fiber_homotopy_primitive(parse_form("2*mu*dmu^dq", c), fib).theta == parse_form("mu^2*dq", c));
  try {
    fiber_homotopy_primitive(parse_form("dq^dp", c), fib);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotVanishingOnSection);
  }
  try {
    fiber_homotopy_primitive(parse_form("mu*dq^dp", c), fib);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotClosed);
  }
}

TEST_CASE("homotopy identity on random forms") {
  testing::Rng rng(99);
  ChartPtr c = make_chart("c", {"x1", "x2", "mu1", "mu2"});
  const std::vector<int> fib = {2, 3};
  for (int i = 0; i < 25; ++i) {
    Form w = testing::random_form(rng, c, testing::uniform(rng, 1, 3), 2, 4);
    Form lhs = exterior_derivative(homotopy_operator(w, fib)) + homotopy_operator(exterior_derivative(w), fib);
    CHECK(lhs == w - base_part(w, fib));
  }
}

TEST_CASE("Moser vector field") {
  ChartPtr c = make_chart("c", {"q", "p", "z", "mu"});
  Form w1 = parse_form("dq^dp + dmu^dz", c);
  Form w2 = parse_form("dq^dp + dmu^dz + 2*mu*dmu^dq", c);
  MoserRun run = make_moser_run(w1, w2, {3}, {}, 10, 1e-6, 0.1);
  CHECK(run.primitive.theta == parse_form("mu^2*dq", c));
  // i_X(dq^dp) = X^q dp - X^p dq = -(1/100) dq  =>  X^p = 1/100.
  Vec X = moser_vector_field_at(run, Point(c, {0, 0, 0, make_rational(1, 10)}), 0);
  CHECK(X == Vec{0, make_rational(1, 100), 0, 0});
  CHECK(is_zero(moser_vector_field_at(run, Point(c, {1, -1, 1, 0}), make_rational(1, 2))));

  MoserRun same = make_moser_run(w1, w1, {3}, {}, 10, 1e-6, 0.1);
  CHECK(same.primitive.theta.is_zero());
  CHECK(is_zero(moser_vector_field_at(same, Point(c, {1, 1, 1, 1}), 1)));

  // omega_t = dq^dp + dmu^dz + t*(-2)*dmu^dz degenerates at t = 1/2.
  MoserRun deg = make_moser_run(w1, parse_form("dq^dp - dmu^dz", c), {3}, {}, 10, 1e-6, 0.1);
  try {
    moser_vector_field_at(deg, Point(c, {0, 0, 0, 1}), make_rational(1, 2));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateAtPoint);
  }
}

TEST_CASE("run validation") {
  ChartPtr c = make_chart("c", {"q", "p", "z", "mu"});
  Form w = parse_form("dq^dp + dmu^dz", c);
  CHECK_THROWS_AS(make_moser_run(w, w, {3}, {}, 0, 1e-6, 0.1), Error);
  CHECK_THROWS_AS(make_moser_run(w, w, {3}, {}, 10, 0, 0.1), Error);
  CHECK_THROWS_AS(make_moser_run(w, w, {3}, {}, 10, 1e-6, -1), Error);
}

TEST_CASE("flow of identical forms is the identity") {
  ChartPtr c = make_chart("c", {"q", "p", "z", "mu"});
  Form w = parse_form("dq^dp + dmu^dz", c);
  const SampleGrid s = random_grid(c, 3, 5, make_rational(1, 10));
  MoserReport r = moser_flow_verify(make_moser_run(w, w, {3}, s.points, 50, 1e-12, 0.1));
  CHECK(r.pass);
  CHECK(r.max_error < 1e-12);
}

TEST_CASE("flow aborts where omega_t degenerates") {
  ChartPtr c = make_chart("c", {"q", "p", "z", "mu"});
  Form w1 = parse_form("dq^dp + dmu^dz", c);
  Form w2 = parse_form("dq^dp + dmu^dz - 2*dmu^dz", c);
  const SampleGrid s = explicit_grid(c, {{0, 0, 0, make_rational(1, 2)}});
  MoserReport r = moser_flow_verify(make_moser_run(w1, w2, {3}, s.points, 20, 1e-6, 0.5));
  REQUIRE(r.samples.size() == 1);
  CHECK_FALSE(r.pass);
  REQUIRE(r.samples[0].aborted_at_t);
  CHECK(*r.samples[0].aborted_at_t <= 0.5 + 1e-12);
  CHECK_FALSE(r.samples[0].diagnostic.empty());
}

TEST_CASE("contact Moser field stays in ker eta") {
  ChartPtr c = make_chart("c", {"t", "q", "p", "z", "mu"});
  Form e1 = parse_form("dt - p*dq - mu*dz", c);
  Form e2 = parse_form("dt - p*dq - mu*dz + mu^2*dq", c);
  const Point pt(c, {0, 1, 0, 0, make_rational(1, 3)});
  Vec X = contact_moser_vector_field_at(e1, e2, pt, make_rational(1, 2));
  const Form et = e1 + make_rational(1, 2) * (e2 - e1);
  CHECK(dot(evaluate_form(et, pt).as_covector(), X) == 0);
  CHECK(is_zero(contact_moser_vector_field_at(e1, e1, pt, 0)));
}

TEST_CASE("Reeb proportionality") {
  ChartPtr c = make_chart("c", {"t", "th1", "th2"});
  const SampleGrid g = uniform_lattice(c, -1, 1, 3);
  GeometrySpec a = cosymplectic(c, "dth1", "dt^dth2");
  CHECK(reeb_proportionality_check(a, a, g).all_proportional);
  GeometrySpec scaled = cosymplectic(c, "2*dth1", "dt^dth2");
  CHECK(reeb_proportionality_check(a, scaled, g).all_proportional);
  GeometrySpec b = cosymplectic(c, "dth1", "dt^dth2 + t*dth1^dt");
  ProportionalityReport r = reeb_proportionality_check(a, b, g);
  CHECK_FALSE(r.all_proportional);
  REQUIRE(r.witness);
  CHECK(g.points[*r.witness].coords[0] != 0);
  for (std::size_t i = 0; i < g.points.size(); ++i) CHECK(r.proportional[i] == (g.points[i].coords[0] == 0));
}

}
