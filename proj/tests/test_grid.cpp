#include <doctest.h>

#include <set>

#include "errors.hpp"
#include "grid.hpp"
#include "parallel.hpp"

using namespace coiso;

TEST_SUITE("structures") {

TEST_CASE("lattice grids") {
  ChartPtr c = make_chart("c", {"t", "q"});
  SampleGrid g = parse_grid("lattice(-1..1 : 3)", c);
  CHECK(g.points.size() == 9);
  CHECK(g.provenance == SampleGrid::Provenance::Lattice);
  SampleGrid h = parse_grid("lattice(t:0..1:2)", c);
  REQUIRE(h.points.size() == 2);
  CHECK(h.points[1].coords == std::vector<Rational>{1, 0});
  SampleGrid f = parse_grid("lattice(-1/2..1/2 : 2)", c);
  CHECK(f.points.front().coords[0] == make_rational(-1, 2));
  CHECK(parse_grid(g.description, c).points.size() == 9);
  CHECK_THROWS_AS(parse_grid("lattice(w:0..1:2)", c), Error);
  CHECK_THROWS_AS(parse_grid("lattice(0..1)", c), Error);
}

TEST_CASE("explicit and random grids") {
  ChartPtr c = make_chart("c", {"t", "q"});
  SampleGrid p = parse_grid("points((0, 1/2), (1, -1))", c);
  REQUIRE(p.points.size() == 2);
  CHECK(p.points[0].coords[1] == make_rational(1, 2));
  CHECK_THROWS_AS(parse_grid("points((0, 1, 2))", c), Error);

  SampleGrid a = parse_grid("random(seed=7, count=20, box=1)", c);
  SampleGrid b = random_grid(c, 7, 20, 1);
  REQUIRE(a.points.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(a.points[i].coords == b.points[i].coords);
    for (const auto& x : a.points[i].coords) CHECK(abs(x) <= 1);
  }
  CHECK(random_grid(c, 8, 20, 1).points[0].coords != b.points[0].coords);
}

TEST_CASE("section grids") {
  ChartPtr c = make_chart("c", {"q", "z"});
  ChartPtr t = make_chart("t", {"q", "z", "mu"});
  SampleGrid g = uniform_lattice(c, -1, 1, 3);
  SampleGrid on = on_section(g, t);
  CHECK(on.points.size() == 9);
  for (const auto& p : on.points) CHECK(p.coords[2] == 0);
  SampleGrid off = off_section(g, t, make_rational(1, 2), 3);
  CHECK(off.points.size() == 27);
  std::set<Rational> mus;
  for (const auto& p : off.points) mus.insert(p.coords[2]);
  CHECK(mus == std::set<Rational>{make_rational(-1, 2), 0, make_rational(1, 2)});
}

TEST_CASE("parallel map is ordered and rethrows the lowest index") {
  set_thread_override(4);
  auto squares = parallel_map(100, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < 100; ++i) CHECK(squares[i] == i * i);
  try {
    parallel_map(50, [](std::size_t i) -> int {
      if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL("no throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
  set_thread_override(0);
}

}
