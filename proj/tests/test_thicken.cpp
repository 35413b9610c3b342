#include <doctest.h>

#include "errors.hpp"
#include "thicken.hpp"

using namespace coiso;

namespace {

GeometrySpec spec_of(Family f, const ChartPtr& c, std::vector<std::string> etas, std::vector<std::string> omegas,
                     std::optional<int> omega_degree = 2) {
  GeometrySpec s;
  s.family = f;
  s.chart = c;
  for (const auto& e : etas) s.etas.push_back(parse_form(e, c, 1));
  for (const auto& w : omegas) s.omegas.push_back(parse_form(w, c, omega_degree));
  return s;
}

ThickeningReport verify(const ThickeningResult& res, const SampleGrid& g, const ProjectorField& P,
                        const std::vector<NamedField>& reeb = {}) {
  const ChartPtr& total = res.chart.total;
  return verify_thickening(res, on_section(g, total), off_section(g, total, 1, 3), nijenhuis(P).is_zero(), reeb);
}

}  // namespace

TEST_SUITE("thicken") {

TEST_CASE("transversal coframes") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  ProjectorField P = ProjectorField::trivial(c, {2});
  CHECK(transversal_coframe(P, 1) == std::vector<IndexTuple>{{2}});
  ChartPtr m = make_chart("m", {"x1", "x2", "x3", "z"});
  ProjectorField Pm = ProjectorField::trivial(m, {3});
  CHECK(transversal_coframe(Pm, 2) == std::vector<IndexTuple>{{0, 3}, {1, 3}, {2, 3}});
  ChartPtr c5 = make_chart("c", {"t", "q", "p", "z1", "z2"});
  CHECK(transversal_coframe(ProjectorField::trivial(c5, {3, 4}), 1).size() == 2);
  // C(n, d) - C(n - l, d)
  for (int d = 1; d <= 4; ++d) {
    CHECK(static_cast<long>(transversal_coframe(ProjectorField::trivial(c5, {3, 4}), d).size()) ==
          binomial(5, d) - binomial(3, d));
  }
  ThickenedChart tc = make_thickened_chart(Pm, 2);
  CHECK(tc.total->names == std::vector<std::string>{"x1", "x2", "x3", "z", "mu_x1_z", "mu_x2_z", "mu_x3_z"});
  CHECK(tc.label_name(0) == "dx1^P^z");
}

TEST_CASE("tautological forms") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  ThickenedChart tc = make_thickened_chart(ProjectorField::trivial(c, {2}), 1);
  CHECK(tautological_form(tc, ProjectorField::trivial(c, {2})) == parse_form("mu_z*dz", tc.total));
  ProjectorField P(c, {2}, {{parse_scalar("q", c), Scalar(c)}});
  CHECK(tautological_form(tc, P) == parse_form("mu_z*(dz - q*dq)", tc.total));
  ChartPtr m = make_chart("m", {"x1", "x2", "x3", "z"});
  ProjectorField Pm = ProjectorField::trivial(m, {3});
  ThickenedChart tm = make_thickened_chart(Pm, 2);
  CHECK(tautological_form(tm, Pm) ==
        parse_form("mu_x1_z*dx1^dz + mu_x2_z*dx2^dz + mu_x3_z*dx3^dz", tm.total));
}

TEST_CASE("presymplectic thickening") {
  ChartPtr c = make_chart("c", {"q", "p", "z1", "z2"});
  GeometrySpec s = spec_of(Family::Symplectic, c, {}, {"dq^dp"});
  ProjectorField P = ProjectorField::trivial(c, {2, 3});
  const SampleGrid g = uniform_lattice(c, -1, 1, 3);
  ThickeningResult res = thicken(s, P, g);
  CHECK(res.spec_out.nondegenerate);
  CHECK(res.chart.total->dim() == 6);
  CHECK(res.spec_out.omegas[0] == parse_form("dq^dp + dmu_z1^dz1 + dmu_z2^dz2", res.chart.total));
  ThickeningReport r = verify(res, g, P);
  CHECK(r.ok());
  CHECK(r.off_section_required);
  CHECK(r.off_section.ok);
}

TEST_CASE("contact thickening volume") {
  ChartPtr c = make_chart("c", {"t", "q", "p", "z1", "z2"});
  GeometrySpec s = spec_of(Family::Contact, c, {"dt - p*dq"}, {});
  ProjectorField P = ProjectorField::trivial(c, {3, 4});
  ThickeningResult res = thicken(s, P, uniform_lattice(c, -1, 1, 3));
  const ChartPtr& tot = res.chart.total;
  const Form& eta = res.spec_out.etas[0];
  CHECK(eta == parse_form("dt - p*dq - mu_z1*dz1 - mu_z2*dz2", tot));
  Form vol = wedge(eta, wedge_power(exterior_derivative(eta), 3));
  CHECK(vol == Rational(6) * Form::basis(tot, {0, 1, 2, 3, 5, 4, 6}));
}

TEST_CASE("cocontact thickening adds theta") {
  ChartPtr c = make_chart("c", {"s", "t", "q", "p", "z"});
  GeometrySpec s = spec_of(Family::Cocontact, c, {"dt - p*dq"}, {});
  s.xi = parse_form("ds", c);
  ProjectorField P = ProjectorField::trivial(c, {4});
  const SampleGrid g = uniform_lattice(c, -1, 1, 3);
  ThickeningResult res = thicken(s, P, g);
  CHECK(res.spec_out.etas[0] == parse_form("dt - p*dq + mu_z*dz", res.chart.total));
  CHECK(*res.spec_out.xi == parse_form("ds", res.chart.total));
  CHECK(verify(res, g, P).ok());
}

TEST_CASE("multisymplectic thickening") {
  ChartPtr m = make_chart("m", {"x1", "x2", "x3", "z"});
  GeometrySpec s = spec_of(Family::Multisymplectic, m, {}, {"dx1^dx2^dx3"}, std::nullopt);
  ProjectorField P = ProjectorField::trivial(m, {3});
  const SampleGrid g = uniform_lattice(m, -1, 1, 3);
  ThickeningResult res = thicken(s, P, g);
  CHECK(res.spec_out.omegas[0] ==
        parse_form("dx1^dx2^dx3 + dmu_x1_z^dx1^dz + dmu_x2_z^dx2^dz + dmu_x3_z^dx3^dz", res.chart.total));
  ThickeningReport r = verify(res, g, P);
  CHECK(r.ok());
  CHECK(r.ell == 1);
  REQUIRE(r.coisotropic_top_level);
  CHECK(r.coisotropic_top_level->ok);
}

TEST_CASE("cosymplectic-from-multisymplectic label filter") {
  ChartPtr m = make_chart("m", {"t", "q", "p", "z"});
  GeometrySpec s = spec_of(Family::Multisymplectic, m, {}, {"dt^dq^dp"}, std::nullopt);
  ProjectorField P = ProjectorField::trivial(m, {3});
  const SampleGrid g = uniform_lattice(m, -1, 1, 3);
  ThickeningResult res = thicken(s, P, g, 0);
  CHECK(res.chart.labels == std::vector<IndexTuple>{{0, 3}});
  CHECK(res.spec_out.omegas[0] == parse_form("dt^dq^dp + dmu_t_z^dt^dz", res.chart.total));
  CHECK_THROWS_AS(thicken(spec_of(Family::Symplectic, m, {}, {"dq^dp"}), ProjectorField::trivial(m, {0, 3}), g, 0),
                  Error);
}

TEST_CASE("vertical mismatch") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  GeometrySpec s = spec_of(Family::Symplectic, c, {}, {"dq^dp"});
  try {
    thicken(s, ProjectorField::trivial(c, {1}), uniform_lattice(c, -1, 1, 3));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VerticalMismatch);
  }
  GeometrySpec nd = s;
  nd.nondegenerate = true;
  CHECK_THROWS_AS(thicken(nd, ProjectorField::trivial(c, {2}), uniform_lattice(c, -1, 1, 3)), Error);
}

TEST_CASE("non-integrable projector only needs the zero section") {
  ChartPtr c = make_chart("c", {"q", "p", "z"});
  GeometrySpec s = spec_of(Family::Symplectic, c, {}, {"dq^dp"});
  ProjectorField P(c, {2}, {{parse_scalar("p*q", c), Scalar(c)}});
  const SampleGrid g = uniform_lattice(c, -1, 1, 3);
  ThickeningResult res = thicken(s, P, g);
  ThickeningReport r = verify(res, g, P);
  CHECK_FALSE(r.off_section_required);
  CHECK(r.on_section.ok);
  CHECK(r.coisotropic.ok);
  CHECK(r.ok());
}

TEST_CASE("Reeb extension needs P(R) = 0") {
  ChartPtr c = make_chart("c", {"t", "q", "p", "z1", "z2"});
  GeometrySpec s = spec_of(Family::Cosymplectic, c, {"dt"}, {"dq^dp"});
  const SampleGrid g = uniform_lattice(c, -1, 1, 3);
  const VectorField R = parse_vector_field("dt + 3*dz1", c);
  ProjectorField T = ProjectorField::trivial(c, {3, 4});
  ThickeningReport bad = verify(thicken(s, T, g), g, T, {{"R", R}});
  REQUIRE(bad.reeb_extension);
  CHECK_FALSE(bad.reeb_extension->ok);
  CHECK_FALSE(bad.reeb_extension->failing_points.empty());

  ProjectorField P = projector_for_reeb(T, R);
  CHECK(P.correction(0, 0) == parse_scalar("3", c));
  ThickeningReport good = verify(thicken(s, P, g), g, P, {{"R", R}});
  REQUIRE(good.reeb_extension);
  CHECK(good.reeb_extension->ok);
  CHECK(good.ok());
}

TEST_CASE("k-kinds use ell = k") {
  ChartPtr c = make_chart("c", {"q", "p1", "p2", "z"});
  GeometrySpec s = spec_of(Family::KSymplectic, c, {}, {"dq^dp1", "dq^dp2"});
  CHECK(default_ell(s) == 2);
  ProjectorField P = ProjectorField::trivial(c, {3});
  const SampleGrid g = uniform_lattice(c, -1, 1, 3);
  ThickeningReport r = verify(thicken(s, P, g), g, P);
  CHECK(r.ell == 2);
  CHECK(r.ok());
}

}
