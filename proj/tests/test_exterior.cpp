#include <doctest.h>

#include "errors.hpp"
#include "exterior.hpp"
#include "support/random_forms.hpp"

using namespace coiso;
using testing::Rng;

TEST_SUITE("exterior") {

TEST_CASE("basis signs") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  CHECK(Form::basis(c, {1, 0}) == -Form::basis(c, {0, 1}));
  CHECK(Form::basis(c, {0, 0}).is_zero());
  CHECK(wedge(Form::differential(c, 1), Form::differential(c, 0)) == -Form::basis(c, {0, 1}));
  CHECK(parse_form("dp^dq", c) == -Form::basis(c, {0, 1}));
}

TEST_CASE("parse and print") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  Form a = parse_form("dq^dp + z*dq^dz", c);
  CHECK(a.degree() == 2);
  CHECK(a.to_string() == "dq^dp + z*dq^dz");
  CHECK(parse_form(a.to_string(), c) == a);
  CHECK(parse_form("(q + p)*dz", c).coefficient({2}) == parse_scalar("q + p", c));
  CHECK(parse_form("0", c, 2).degree() == 2);
  CHECK_THROWS_AS(parse_form("dq + dq^dp", c), Error);
  CHECK_THROWS_AS(parse_form("dw", c), Error);
  CHECK_THROWS_AS(parse_form("dq^2", c), Error);
}

TEST_CASE("exterior derivative examples") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  CHECK(exterior_derivative(parse_form("z*dq", c)) == parse_form("-dq^dz", c));
  CHECK(exterior_derivative(parse_form("q*p", c)) == parse_form("p*dq + q*dp", c));
  CHECK(exterior_derivative(parse_form("dt", make_chart("t", {"t"}))).is_zero());
}

TEST_CASE("interior product follows the first slot") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  VectorField dq = VectorField::coordinate(c, 0);
  VectorField dp = VectorField::coordinate(c, 1);
  Form w = parse_form("dq^dp", c);
  CHECK(interior_product(dq, w) == parse_form("dp", c));
  CHECK(interior_product(dp, w) == parse_form("-dq", c));
  CHECK_THROWS_AS(interior_product(dq, parse_form("q", c)), Error);
}

TEST_CASE("lie bracket") {
  ChartPtr c = make_chart("c", {"q", "p"});
  VectorField X = parse_vector_field("q*dp", c);
  VectorField Y = VectorField::coordinate(c, 0);
  CHECK(lie_bracket(X, Y) == parse_vector_field("-dp", c));
  CHECK(lie_bracket(Y, X) == parse_vector_field("dp", c));
}

TEST_CASE("pullback along a polynomial map") {
  ChartPtr a = make_chart("a", {"u", "v"});
  ChartPtr b = make_chart("b", {"q", "p"});
  // q = u*v, p = v
  std::vector<Scalar> images = {parse_scalar("u*v", a), parse_scalar("v", a)};
  CHECK(pullback(parse_form("dq^dp", b), images) == parse_form("v*du^dv", a));
  CHECK(pullback(parse_form("p*dq", b), images) == parse_form("v^2*du + u*v*dv", a));
}

TEST_CASE("wedge power") {
  ChartPtr c = make_chart("c", {"q1", "p1", "q2", "p2"});
  Form w = parse_form("dq1^dp1 + dq2^dp2", c);
  CHECK(wedge_power(w, 2) == parse_form("2*dq1^dp1^dq2^dp2", c));
  CHECK(wedge_power(w, 3).is_zero());
  CHECK(wedge_power(w, 0) == parse_form("1", c));
}

TEST_CASE("evaluation at a point") {
  ChartPtr c = make_chart("c", {"q", "p"});
  AlternatingTensor t = evaluate_form(parse_form("q*dq^dp", c), Point(c, {3, 0}));
  CHECK(t.at({0, 1}) == 3);
  CHECK(t.at({1, 0}) == -3);
}

TEST_CASE("random identities") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testing::uniform(rng, 2, 5);
    ChartPtr c = testing::numbered_chart(n);
    const int k = testing::uniform(rng, 0, std::min(3, n));
    Form a = testing::random_form(rng, c, k, 2, 3);
    CHECK(exterior_derivative(exterior_derivative(a)).is_zero());

    VectorField X = testing::random_vector_field(rng, c, 2);
    CHECK(lie_derivative(X, a) == testing::lie_derivative_oracle(X, a));

    const int l = testing::uniform(rng, 0, std::min(2, n - k));
    Form b = testing::random_form(rng, c, l, 2, 2);
    Form lhs = exterior_derivative(wedge(a, b));
    Form rhs = wedge(exterior_derivative(a), b);
    Form second = wedge(a, exterior_derivative(b));
    if (k % 2 == 0) {
      rhs += second;
    } else {
      rhs -= second;
    }
    CHECK(lhs == rhs);
    // Graded commutativity.
    Form ab = wedge(a, b);
    CHECK(((k * l) % 2 == 0 ? ab : -ab) == wedge(b, a));
  }
}

TEST_CASE("form text round-trips") {
  Rng rng(8);
  ChartPtr c = testing::numbered_chart(4);
  for (int i = 0; i < 40; ++i) {
    Form a = testing::random_form(rng, c, testing::uniform(rng, 1, 3), 2, 3);
    CHECK(parse_form(a.to_string(), c, a.degree()) == a);
  }
}

TEST_CASE("compiled forms") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  CompiledForm f(parse_form("q*dq^dp - z^2*dp^dz", c));
  std::vector<double> out;
  std::vector<double> x = {2.0, 1.0, 3.0};
  f.evaluate(x, out);
  REQUIRE(f.tuples().size() == 2);
  CHECK(out[0] == 2.0);
  CHECK(out[1] == -9.0);
}

}
