#include "thicken.hpp"

#include <algorithm>

#include "errors.hpp"
#include "parallel.hpp"

namespace coiso {

std::vector<int> ThickenedChart::fiber_indices() const {
  std::vector<int> out;
  for (int i = base_dim(); i < total->dim(); ++i) out.push_back(i);
  return out;
}

std::string ThickenedChart::label_name(std::size_t i) const {
  std::string s;
  for (std::size_t j = 0; j < labels[i].size(); ++j) {
    int c = labels[i][j];
    if (j) s += "^";
    bool v = std::binary_search(vertical.begin(), vertical.end(), c);
    s += (v ? "P^" : "d") + base->names[c];
  }
  return s;
}

std::vector<Scalar> ThickenedChart::projection() const {
  std::vector<Scalar> out;
  for (int i = 0; i < base_dim(); ++i) out.push_back(Scalar::coordinate(total, i));
  return out;
}

std::vector<Scalar> ThickenedChart::zero_section() const {
  std::vector<Scalar> out;
  for (int i = 0; i < base_dim(); ++i) out.push_back(Scalar::coordinate(base, i));
  for (int i = 0; i < fiber_dim(); ++i) out.emplace_back(base);
  return out;
}

std::vector<IndexTuple> transversal_coframe(const ProjectorField& P, int degree, std::optional<int> required) {
  if (degree < 1) fail(ErrorCode::BadDegree, "transversal coframe needs degree >= 1");
  const auto& vertical = P.vertical();
  std::vector<IndexTuple> out;
  for (auto& t : increasing_tuples(P.chart()->dim(), degree)) {
    bool has_vertical = std::any_of(t.begin(), t.end(), [&](int i) {
      return std::binary_search(vertical.begin(), vertical.end(), i);
    });
    if (!has_vertical) continue;
    if (required && std::find(t.begin(), t.end(), *required) == t.end()) continue;
    out.push_back(std::move(t));
  }
  return out;
}

ThickenedChart make_thickened_chart(const ProjectorField& P, int degree, std::optional<int> required) {
  ThickenedChart tc;
  tc.base = P.chart();
  tc.vertical = P.vertical();
  tc.label_degree = degree;
  tc.labels = transversal_coframe(P, degree, required);
  std::vector<std::string> names = tc.base->names;
  for (const auto& label : tc.labels) {
    std::string name = "mu";
    for (int c : label) name += "_" + tc.base->names[c];
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      fail(ErrorCode::InvalidInput, "fiber coordinate " + name + " collides with a chart coordinate");
    }
    names.push_back(std::move(name));
  }
  tc.total = make_chart(tc.base->id + "~", std::move(names));
  return tc;
}

Form tautological_form(const ThickenedChart& tc, const ProjectorField& P) {
  const ChartPtr& total = tc.total;
  std::vector<Form> coframe;
  for (int i = 0; i < tc.base_dim(); ++i) {
    auto it = std::find(P.vertical().begin(), P.vertical().end(), i);
    if (it == P.vertical().end()) {
      coframe.push_back(Form::differential(total, i));
    } else {
      coframe.push_back(P.vertical_coframe(it - P.vertical().begin()).lift(total));
    }
  }
  Form theta(total, tc.label_degree);
  for (std::size_t l = 0; l < tc.labels.size(); ++l) {
    Form term = Form::from_scalar(Scalar::coordinate(total, tc.base_dim() + static_cast<int>(l)));
    for (int c : tc.labels[l]) term = wedge(term, coframe[c]);
    theta += term;
  }
  return theta;
}

int default_ell(const GeometrySpec& spec) {
  switch (spec.family) {
    case Family::KSymplectic:
    case Family::KCosymplectic:
    case Family::KContact:
      return spec.k();
    case Family::Multisymplectic:
      return std::max(1, spec.omegas[0].degree() - 2);
    default:
      return 1;
  }
}

ThickeningResult thicken(const GeometrySpec& spec, const ProjectorField& P, const SampleGrid& grid,
                         std::optional<int> fiber_filter) {
  check_spec(spec);
  if (spec.nondegenerate) fail(ErrorCode::InvalidInput, "input is already " + kind_name(spec));
  require_same_chart(spec.chart, P.chart(), "projector");
  PreparedSpec prep(spec);
  const int n = spec.chart->dim();
  const Subspace expected = Subspace::coordinate(n, P.vertical());
  auto ok = parallel_map(grid.points.size(), [&](std::size_t i) {
    return prep.characteristic(grid.points[i].coords) == expected;
  });
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (!ok[i]) {
      fail(ErrorCode::VerticalMismatch,
           "Im P = " + expected.to_string() + " differs from the characteristic distribution " +
               prep.characteristic(grid.points[i].coords).to_string() + " at " + point_to_string(grid.points[i]));
    }
  }

  const int degree = spec.family == Family::Multisymplectic ? spec.omegas[0].degree() - 1 : 1;
  if (fiber_filter && spec.family != Family::Multisymplectic) {
    fail(ErrorCode::InvalidInput, "fiber_filter only applies to multisymplectic inputs");
  }
  ThickeningResult res{spec, make_thickened_chart(P, degree, fiber_filter), Form(spec.chart, 0), {}};
  const ChartPtr& total = res.chart.total;
  res.theta = tautological_form(res.chart, P);
  const Form dtheta = exterior_derivative(res.theta);

  GeometrySpec& out = res.spec_out;
  out.family = spec.family;
  out.nondegenerate = true;
  out.chart = total;
  auto up = [&](const Form& f) { return f.lift(total); };
  switch (spec.family) {
    case Family::Symplectic:
    case Family::KSymplectic:
    case Family::Multisymplectic:
      for (const auto& w : spec.omegas) out.omegas.push_back(up(w) + dtheta);
      break;
    case Family::Cosymplectic:
    case Family::KCosymplectic:
      for (const auto& e : spec.etas) out.etas.push_back(up(e));
      for (const auto& w : spec.omegas) out.omegas.push_back(up(w) + dtheta);
      break;
    case Family::Contact:
    case Family::KContact:
      for (const auto& e : spec.etas) out.etas.push_back(up(e) - res.theta);
      break;
    case Family::Cocontact:
      out.xi = up(*spec.xi);
      out.etas.push_back(up(spec.etas[0]) + res.theta);
      break;
  }
  return res;
}

bool ThickeningReport::ok() const {
  for (const auto& v : closedness) {
    if (!v.ok) return false;
  }
  if (!zero_section.ok || !on_section.ok || !coisotropic.ok) return false;
  if (off_section_required && !off_section.ok) return false;
  if (coisotropic_top_level && !coisotropic_top_level->ok) return false;
  if (reeb_extension && !reeb_extension->ok) return false;
  return true;
}

namespace {

bool nondegenerate_at(const PreparedSpec& prep, std::span<const Rational> x) {
  Subspace v = prep.characteristic(x);
  for (const auto& [name, ok] : point_axioms(prep, x, v)) {
    if (!ok) return false;
  }
  return true;
}

}  // namespace

ThickeningReport verify_thickening(const ThickeningResult& res, const SampleGrid& on_grid,
                                   const SampleGrid& off_grid, bool nijenhuis_zero,
                                   const std::vector<NamedField>& user_reeb, std::optional<int> ell_override) {
  ThickeningReport r;
  const GeometrySpec& out = res.spec_out;
  PreparedSpec prep(out);

  for (const auto& [name, f] : named_forms(out)) {
    bool needs_closed = out.family != Family::Contact && out.family != Family::KContact &&
                        !(out.family == Family::Cocontact && name == "eta");
    if (!needs_closed) continue;
    Form d = exterior_derivative(*f);
    r.closedness.push_back({"d" + name + " = 0", true, d.is_zero(), {}, d.is_zero() ? "" : d.to_string()});
  }

  // Pulling the output back along the zero section gives the input.
  const auto zs = res.chart.zero_section();
  auto in_forms = named_forms(res.spec_in);
  auto out_forms = named_forms(out);
  for (std::size_t i = 0; i < in_forms.size(); ++i) {
    Form back = pullback(*out_forms[i].second, zs);
    if (!(back == *in_forms[i].second)) {
      r.zero_section.ok = false;
      r.zero_section.detail += in_forms[i].first + " ";
    }
  }

  auto check_grid = [&](const SampleGrid& g, Verdict& v) {
    auto ok = parallel_map(g.points.size(), [&](std::size_t i) { return nondegenerate_at(prep, g.points[i].coords); });
    for (std::size_t i = 0; i < ok.size(); ++i) {
      if (!ok[i]) {
        v.ok = false;
        v.failing_points.push_back(i);
      }
    }
  };
  check_grid(on_grid, r.on_section);
  check_grid(off_grid, r.off_section);
  r.off_section_required = nijenhuis_zero;

  const int n = out.chart->dim();
  std::vector<int> base_dirs;
  for (int i = 0; i < res.chart.base_dim(); ++i) base_dirs.push_back(i);
  const Subspace W = Subspace::coordinate(n, base_dirs);
  r.ell = ell_override.value_or(default_ell(res.spec_in));
  r.coisotropic.name = "zero section is " + std::to_string(r.ell) + "-coisotropic";
  std::optional<int> top_ell;
  if (out.family == Family::Multisymplectic && out.omegas[0].degree() - 1 != r.ell) {
    top_ell = out.omegas[0].degree() - 1;
    r.coisotropic_top_level = Verdict{"zero section is " + std::to_string(*top_ell) + "-coisotropic", false, true, {}, ""};
  }
  auto cois = parallel_map(on_grid.points.size(), [&](std::size_t i) {
    PointStructure ps = prep.at(on_grid.points[i].coords);
    CoisotropyResult c = is_coisotropic(W, ps, r.ell);
    std::optional<bool> top;
    if (top_ell) top = is_coisotropic(W, ps, *top_ell).coisotropic;
    return std::make_tuple(c.coisotropic, c.witness.value_or(Vec{}), top);
  });
  for (std::size_t i = 0; i < cois.size(); ++i) {
    const auto& [ok, witness, top] = cois[i];
    if (!ok) {
      r.coisotropic.ok = false;
      r.coisotropic.failing_points.push_back(i);
      r.witnesses.push_back(witness);
    }
    if (top && !*top) {
      r.coisotropic_top_level->ok = false;
      r.coisotropic_top_level->failing_points.push_back(i);
    }
  }

  if (has_reeb(out.family)) {
    r.reeb_on_section = parallel_map(on_grid.points.size(), [&](std::size_t i) {
      return reeb_solve(prep, on_grid.points[i].coords);
    });
    if (!user_reeb.empty()) {
      Verdict v{"thickened Reeb field restricts to the chosen R", false, true, {}, ""};
      for (std::size_t i = 0; i < on_grid.points.size(); ++i) {
        std::span<const Rational> base_x(on_grid.points[i].coords.data(), res.chart.base_dim());
        bool ok = true;
        for (const auto& fam : r.reeb_on_section[i]) {
          auto it = std::find_if(user_reeb.begin(), user_reeb.end(),
                                 [&](const NamedField& u) { return u.label == fam.label; });
          if (it == user_reeb.end()) continue;
          Vec want = it->field.evaluate(base_x);
          want.resize(n, Rational(0));
          if (fam.particular != want || !fam.kernel.empty()) ok = false;
        }
        if (!ok) {
          v.ok = false;
          v.failing_points.push_back(i);
        }
      }
      r.reeb_extension = v;
    }
  }
  return r;
}

ProjectorField projector_for_reeb(const ProjectorField& base, const VectorField& R) {
  require_same_chart(base.chart(), R.chart, "Reeb field");
  const auto& hor = base.horizontal();
  const auto& ver = base.vertical();
  std::optional<std::size_t> a0;
  Rational r0;
  for (std::size_t a = 0; a < hor.size(); ++a) {
    if (auto c = R.components[hor[a]].constant_value(); c && *c != 0) {
      a0 = a;
      r0 = *c;
      break;
    }
  }
  if (!a0) {
    fail(ErrorCode::InvalidInput, "R has no horizontal component with a nonzero constant coefficient");
  }
  auto corr = base.corrections();
  for (std::size_t A = 0; A < ver.size(); ++A) {
    Scalar s = R.components[ver[A]];
    for (std::size_t a = 0; a < hor.size(); ++a) {
      if (a != *a0) s -= corr[A][a] * R.components[hor[a]];
    }
    corr[A][*a0] = Rational(1 / r0) * s;
  }
  return ProjectorField(base.chart(), ver, std::move(corr));
}

}  // namespace coiso
