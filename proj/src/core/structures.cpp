#include "structures.hpp"

#include <algorithm>
#include <cctype>

#include "errors.hpp"
#include "parallel.hpp"

namespace coiso {

int GeometrySpec::k() const {
  switch (family) {
    case Family::KSymplectic:
    case Family::KCosymplectic:
      return static_cast<int>(omegas.size());
    case Family::KContact:
      return static_cast<int>(etas.size());
    default:
      return 1;
  }
}

std::string kind_name(Family f, bool nondegenerate) {
  const std::string pre = nondegenerate ? "" : "pre";
  switch (f) {
    case Family::Symplectic: return pre + "symplectic";
    case Family::Cosymplectic: return pre + "cosymplectic";
    case Family::Contact: return pre + "contact";
    case Family::Cocontact: return pre + "cocontact";
    case Family::KSymplectic: return "k-" + pre + "symplectic";
    case Family::KCosymplectic: return "k-" + pre + "cosymplectic";
    case Family::KContact: return "k-" + pre + "contact";
    case Family::Multisymplectic: return pre + "multisymplectic";
  }
  return "?";
}

std::string kind_name(const GeometrySpec& s) { return kind_name(s.family, s.nondegenerate); }

std::optional<std::pair<Family, bool>> parse_kind(std::string name) {
  std::string key;
  for (char c : name) {
    if (c != '-' && c != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  static const Family all[] = {Family::Symplectic,   Family::Cosymplectic,  Family::Contact,
                               Family::Cocontact,    Family::KSymplectic,   Family::KCosymplectic,
                               Family::KContact,     Family::Multisymplectic};
  for (Family f : all) {
    for (bool nd : {false, true}) {
      std::string canon;
      for (char c : kind_name(f, nd)) {
        if (c != '-') canon += c;
      }
      if (canon == key) return std::make_pair(f, nd);
    }
  }
  return std::nullopt;
}

bool has_reeb(Family f) {
  return f == Family::Cosymplectic || f == Family::Contact || f == Family::Cocontact ||
         f == Family::KCosymplectic || f == Family::KContact;
}

namespace {

void need_degree(const Form& f, int degree, const std::string& name) {
  if (f.degree() != degree) {
    fail(ErrorCode::BadDegree, name + " must be a " + std::to_string(degree) + "-form, got degree " +
                                   std::to_string(f.degree()));
  }
}

void need_count(std::size_t have, std::size_t want, const std::string& what) {
  if (have != want) {
    fail(ErrorCode::InvalidInput, "expected " + std::to_string(want) + " " + what + ", got " +
                                      std::to_string(have));
  }
}

}  // namespace

std::vector<std::pair<std::string, const Form*>> named_forms(const GeometrySpec& s) {
  std::vector<std::pair<std::string, const Form*>> out;
  const bool indexed = s.family == Family::KSymplectic || s.family == Family::KCosymplectic ||
                       s.family == Family::KContact;
  if (s.xi) out.emplace_back("xi", &*s.xi);
  for (std::size_t i = 0; i < s.etas.size(); ++i) {
    out.emplace_back(indexed ? "eta" + std::to_string(i + 1) : "eta", &s.etas[i]);
  }
  for (std::size_t i = 0; i < s.omegas.size(); ++i) {
    out.emplace_back(indexed ? "omega" + std::to_string(i + 1) : "omega", &s.omegas[i]);
  }
  return out;
}

void check_spec(const GeometrySpec& s) {
  if (!s.chart) fail(ErrorCode::InvalidInput, "structure without a chart");
  for (const auto& [name, f] : named_forms(s)) require_same_chart(s.chart, f->chart(), name.c_str());
  const std::size_t xi = s.xi ? 1 : 0;
  switch (s.family) {
    case Family::Symplectic:
      need_count(xi + s.etas.size(), 0, "1-forms");
      need_count(s.omegas.size(), 1, "omega");
      need_degree(s.omegas[0], 2, "omega");
      break;
    case Family::Cosymplectic:
      need_count(xi, 0, "xi");
      need_count(s.etas.size(), 1, "eta");
      need_count(s.omegas.size(), 1, "omega");
      need_degree(s.etas[0], 1, "eta");
      need_degree(s.omegas[0], 2, "omega");
      break;
    case Family::Contact:
      need_count(xi + s.omegas.size(), 0, "extra forms");
      need_count(s.etas.size(), 1, "eta");
      need_degree(s.etas[0], 1, "eta");
      break;
    case Family::Cocontact:
      need_count(xi, 1, "xi");
      need_count(s.etas.size(), 1, "eta");
      need_count(s.omegas.size(), 0, "omega");
      need_degree(*s.xi, 1, "xi");
      need_degree(s.etas[0], 1, "eta");
      break;
    case Family::KSymplectic:
      need_count(xi + s.etas.size(), 0, "1-forms");
      if (s.omegas.empty()) fail(ErrorCode::InvalidInput, "k-symplectic kinds need omega1..omegak");
      for (std::size_t j = 0; j < s.omegas.size(); ++j) need_degree(s.omegas[j], 2, "omega" + std::to_string(j + 1));
      break;
    case Family::KCosymplectic:
      need_count(xi, 0, "xi");
      if (s.omegas.empty()) fail(ErrorCode::InvalidInput, "k-cosymplectic kinds need omega1..omegak");
      need_count(s.etas.size(), s.omegas.size(), "eta forms (one per omega)");
      for (std::size_t j = 0; j < s.omegas.size(); ++j) {
        need_degree(s.etas[j], 1, "eta" + std::to_string(j + 1));
        need_degree(s.omegas[j], 2, "omega" + std::to_string(j + 1));
      }
      break;
    case Family::KContact:
      need_count(xi + s.omegas.size(), 0, "extra forms");
      if (s.etas.empty()) fail(ErrorCode::InvalidInput, "k-contact kinds need eta1..etak");
      for (std::size_t j = 0; j < s.etas.size(); ++j) need_degree(s.etas[j], 1, "eta" + std::to_string(j + 1));
      break;
    case Family::Multisymplectic:
      need_count(xi + s.etas.size(), 0, "1-forms");
      need_count(s.omegas.size(), 1, "omega");
      if (s.omegas[0].degree() < 2) fail(ErrorCode::BadDegree, "multisymplectic omega needs degree >= 2");
      break;
  }
}

// ---------------------------------------------------------------------------

PreparedSpec::PreparedSpec(GeometrySpec spec) : spec_(std::move(spec)) {
  check_spec(spec_);
  if (spec_.family == Family::Contact || spec_.family == Family::KContact ||
      spec_.family == Family::Cocontact) {
    for (const auto& e : spec_.etas) d_etas_.push_back(exterior_derivative(e));
  }
}

PointStructure PreparedSpec::at(std::span<const Rational> x) const {
  PointStructure ps{spec_.family, {}, {}, std::nullopt};
  auto covector = [&](const Form& f) { return evaluate_form(f, x).as_covector(); };
  switch (spec_.family) {
    case Family::Symplectic:
    case Family::KSymplectic:
      for (const auto& w : spec_.omegas) ps.pairings.push_back(evaluate_form(w, x));
      break;
    case Family::Cosymplectic:
    case Family::KCosymplectic:
      for (const auto& e : spec_.etas) ps.constraints.push_back(covector(e));
      for (const auto& w : spec_.omegas) ps.pairings.push_back(evaluate_form(w, x));
      break;
    case Family::Contact:
    case Family::KContact:
      for (const auto& e : spec_.etas) ps.constraints.push_back(covector(e));
      for (const auto& de : d_etas_) ps.pairings.push_back(evaluate_form(de, x));
      break;
    case Family::Cocontact:
      ps.constraints.push_back(covector(*spec_.xi));
      ps.constraints.push_back(covector(spec_.etas[0]));
      ps.pairings.push_back(evaluate_form(d_etas_[0], x));
      break;
    case Family::Multisymplectic:
      ps.top = evaluate_form(spec_.omegas[0], x);
      break;
  }
  return ps;
}

namespace {

// Rows of the flat map X -> i_X T, one per (k-1)-tuple.
void append_kernel_rows(Matrix& m, const AlternatingTensor& t) {
  const int n = t.dimension();
  for (const auto& rest : increasing_tuples(n, t.degree() - 1)) {
    Vec row(n, Rational(0));
    bool any = false;
    for (int i = 0; i < n; ++i) {
      IndexTuple idx{i};
      idx.insert(idx.end(), rest.begin(), rest.end());
      row[i] = t.at(idx);
      any = any || row[i] != 0;
    }
    if (any) m.append_row(row);
  }
}

int flat_rank(const AlternatingTensor& t) {
  if (t.degree() == 0) return t.is_zero() ? 0 : 1;
  Matrix m(0, t.dimension());
  append_kernel_rows(m, t);
  return rank(m);
}

}  // namespace

Subspace PreparedSpec::characteristic(const PointStructure& ps) const {
  const int n = spec_.chart->dim();
  if (spec_.family == Family::Contact || spec_.family == Family::KContact) {
    Matrix c(0, n);
    for (const auto& v : ps.constraints) c.append_row(v);
    Subspace d(n, nullspace(c, n));
    return joint_orthogonal(d, ps.pairings, ps.constraints);
  }
  Matrix m(0, n);
  for (const auto& v : ps.constraints) m.append_row(v);
  for (const auto& p : ps.pairings) append_kernel_rows(m, p);
  if (ps.top) append_kernel_rows(m, *ps.top);
  return Subspace(n, nullspace(m, n));
}

Subspace PreparedSpec::characteristic(std::span<const Rational> x) const { return characteristic(at(x)); }

Subspace characteristic_distribution(const GeometrySpec& spec, const Point& pt) {
  require_same_chart(spec.chart, pt.chart, "characteristic distribution");
  return PreparedSpec(spec).characteristic(pt.coords);
}

std::vector<std::pair<std::string, bool>> point_axioms(const PreparedSpec& prep, std::span<const Rational> x,
                                                       const Subspace& v) {
  const GeometrySpec& s = prep.spec();
  const int n = s.chart->dim();
  const int corank = n - v.dim();
  std::vector<std::pair<std::string, bool>> out;
  if (s.nondegenerate) out.emplace_back("V = 0", v.dim() == 0);

  auto one = [&] {
    AlternatingTensor t(n, 0);
    t.add({}, 1);
    return t;
  };
  auto power = [&](const AlternatingTensor& a, int r) {
    AlternatingTensor t = one();
    for (int i = 0; i < r; ++i) t = wedge(t, a);
    return t;
  };
  // Volume-type condition with exponent r = (corank - shift) / 2.
  auto volume = [&](const std::string& name, std::vector<AlternatingTensor> lead, const AlternatingTensor& two,
                    int shift) {
    if ((corank - shift) < 0 || (corank - shift) % 2 != 0) {
      out.emplace_back(name + " (corank parity)", false);
      return;
    }
    AlternatingTensor t = power(two, (corank - shift) / 2);
    for (auto it = lead.rbegin(); it != lead.rend(); ++it) t = wedge(*it, t);
    out.emplace_back(name + ", r = " + std::to_string((corank - shift) / 2), !t.is_zero());
  };

  switch (s.family) {
    case Family::Symplectic:
      volume("omega^r != 0", {}, evaluate_form(s.omegas[0], x), 0);
      break;
    case Family::Cosymplectic:
      volume("eta ^ omega^r != 0", {evaluate_form(s.etas[0], x)}, evaluate_form(s.omegas[0], x), 1);
      break;
    case Family::Contact:
      volume("eta ^ (d eta)^r != 0", {evaluate_form(s.etas[0], x)}, evaluate_form(prep.d_etas()[0], x), 1);
      break;
    case Family::Cocontact:
      volume("xi ^ eta ^ (d eta)^r != 0", {evaluate_form(*s.xi, x), evaluate_form(s.etas[0], x)},
             evaluate_form(prep.d_etas()[0], x), 2);
      break;
    case Family::KCosymplectic:
    case Family::KContact: {
      AlternatingTensor t = one();
      for (const auto& e : s.etas) t = wedge(t, evaluate_form(e, x));
      out.emplace_back("eta1 ^ ... ^ etak != 0", !t.is_zero());
      break;
    }
    case Family::KSymplectic:
    case Family::Multisymplectic:
      break;
  }
  return out;
}

bool StructureReport::ok() const {
  if (!constant_rank) return false;
  for (const auto& v : closedness) {
    if (!v.ok) return false;
  }
  for (const auto& v : axioms) {
    if (!v.ok) return false;
  }
  return true;
}

StructureReport validate(const GeometrySpec& spec, const SampleGrid& grid) {
  if (grid.points.empty()) fail(ErrorCode::InvalidInput, "validation grid is empty");
  PreparedSpec prep(spec);
  StructureReport report;

  std::vector<std::pair<std::string, const Form*>> closed;
  const auto forms = named_forms(spec);
  for (const auto& [name, f] : forms) {
    bool needs_closed = spec.family != Family::Contact && spec.family != Family::KContact &&
                        !(spec.family == Family::Cocontact && name == "eta");
    if (needs_closed) closed.emplace_back(name, f);
  }
  for (const auto& [name, f] : closed) {
    Form d = exterior_derivative(*f);
    report.closedness.push_back({"d" + name + " = 0", true, d.is_zero(), {}, d.is_zero() ? "" : d.to_string()});
  }

  const auto& d_etas = prep.d_etas();
  report.profile = parallel_map(grid.points.size(), [&](std::size_t i) {
    const Point& pt = grid.points[i];
    require_same_chart(spec.chart, pt.chart, "grid point");
    PointProfile p;
    p.index = i;
    for (const auto& [name, f] : forms) p.ranks.emplace_back(name, flat_rank(evaluate_form(*f, pt.coords)));
    for (std::size_t j = 0; j < d_etas.size(); ++j) {
      std::string name = forms.size() > 1 && spec.family == Family::KContact ? "d eta" + std::to_string(j + 1)
                                                                             : "d eta";
      p.ranks.emplace_back(name, flat_rank(evaluate_form(d_etas[j], pt.coords)));
    }
    Subspace v = prep.characteristic(pt.coords);
    p.dim_v = v.dim();
    p.ranks.emplace_back("V", v.dim());
    p.axioms = point_axioms(prep, pt.coords, v);
    return p;
  });

  // Generic profile: smallest characteristic distribution, first on ties.
  std::size_t generic = 0;
  for (std::size_t i = 1; i < report.profile.size(); ++i) {
    if (report.profile[i].dim_v < report.profile[generic].dim_v) generic = i;
  }
  for (std::size_t i = 0; i < report.profile.size(); ++i) {
    if (report.profile[i].ranks != report.profile[generic].ranks) {
      report.constant_rank = false;
      report.degenerate_points.push_back(i);
    }
  }

  for (const auto& p : report.profile) {
    for (const auto& [name, ok] : p.axioms) {
      auto it = std::find_if(report.axioms.begin(), report.axioms.end(),
                             [&, &nm = name](const Verdict& v) { return v.name == nm; });
      if (it == report.axioms.end()) {
        report.axioms.push_back({name, false, true, {}, ""});
        it = report.axioms.end() - 1;
      }
      if (!ok) {
        it->ok = false;
        it->failing_points.push_back(p.index);
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

bool too_large(const Scalar& s) { return s.terms().size() > 4000 || s.total_degree() > 48; }

}  // namespace

std::optional<std::vector<VectorField>> symbolic_nullspace(std::vector<std::vector<Scalar>> rows,
                                                           const ChartPtr& chart) {
  const int n = chart->dim();
  auto row_zero = [](const std::vector<Scalar>& r) {
    return std::all_of(r.begin(), r.end(), [](const Scalar& s) { return s.is_zero(); });
  };
  rows.erase(std::remove_if(rows.begin(), rows.end(), row_zero), rows.end());

  std::vector<int> pivots;
  std::vector<Scalar> pivot_values;
  std::size_t r = 0;
  for (int col = 0; col < n && r < rows.size(); ++col) {
    std::optional<std::size_t> best;
    for (std::size_t i = r; i < rows.size(); ++i) {
      const Scalar& e = rows[i][col];
      if (e.is_zero()) continue;
      if (!best) {
        best = i;
        continue;
      }
      const Scalar& b = rows[*best][col];
      auto cost = [](const Scalar& s) { return std::make_pair(s.total_degree(), s.terms().size()); };
      if (cost(e) < cost(b)) best = i;
    }
    if (!best) continue;
    std::swap(rows[r], rows[*best]);
    Scalar a = rows[r][col];
    if (auto c = a.constant_value()) {
      Rational inv = 1 / *c;
      for (auto& e : rows[r]) e *= inv;
      a = Scalar::constant(chart, 1);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col].is_zero()) continue;
      Scalar b = rows[i][col];
      for (int j = 0; j < n; ++j) {
        Scalar v = a * rows[i][j] - b * rows[r][j];
        if (too_large(v)) return std::nullopt;
        rows[i][j] = std::move(v);
      }
    }
    pivots.push_back(col);
    pivot_values.push_back(a);
    ++r;
  }

  std::vector<VectorField> out;
  for (int f = 0; f < n; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    VectorField X = VectorField::zero(chart);
    Scalar all = Scalar::constant(chart, 1);
    for (const auto& a : pivot_values) all = all * a;
    X.components[f] = all;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      Scalar others = Scalar::constant(chart, 1);
      for (std::size_t m = 0; m < pivots.size(); ++m) {
        if (m != k) others = others * pivot_values[m];
      }
      X.components[pivots[k]] = -(others * rows[k][f]);
    }
    out.push_back(std::move(X));
  }
  return out;
}

namespace {

std::vector<std::vector<Scalar>> form_kernel_rows(const Form& f) {
  const ChartPtr& chart = f.chart();
  const int n = chart->dim();
  std::vector<std::vector<Scalar>> rows;
  for (const auto& rest : increasing_tuples(n, f.degree() - 1)) {
    std::vector<Scalar> row;
    bool any = false;
    for (int i = 0; i < n; ++i) {
      IndexTuple idx{i};
      idx.insert(idx.end(), rest.begin(), rest.end());
      row.push_back(f.coefficient(idx));
      any = any || !row.back().is_zero();
    }
    if (any) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::optional<std::vector<VectorField>> characteristic_frame(const GeometrySpec& spec) {
  PreparedSpec prep(spec);
  const ChartPtr& chart = spec.chart;
  const int n = chart->dim();
  std::vector<std::vector<Scalar>> rows;
  auto add_rows = [&](const Form& f) {
    for (auto& r : form_kernel_rows(f)) rows.push_back(std::move(r));
  };
  switch (spec.family) {
    case Family::Contact:
    case Family::KContact: {
      std::vector<std::vector<Scalar>> eta_rows;
      for (const auto& e : spec.etas) {
        for (auto& r : form_kernel_rows(e)) eta_rows.push_back(std::move(r));
      }
      auto d = symbolic_nullspace(eta_rows, chart);
      if (!d) return std::nullopt;
      rows = eta_rows;
      for (const auto& de : prep.d_etas()) {
        for (const auto& w : *d) {
          std::vector<Scalar> row;
          for (int j = 0; j < n; ++j) {
            Scalar s(chart);
            for (int i = 0; i < n; ++i) {
              if (!w.components[i].is_zero()) s += de.coefficient({j, i}) * w.components[i];
            }
            row.push_back(std::move(s));
          }
          rows.push_back(std::move(row));
        }
      }
      break;
    }
    case Family::Cocontact:
      add_rows(*spec.xi);
      add_rows(spec.etas[0]);
      add_rows(prep.d_etas()[0]);
      break;
    default:
      for (const auto& e : spec.etas) add_rows(e);
      for (const auto& w : spec.omegas) add_rows(w);
      break;
  }
  return symbolic_nullspace(std::move(rows), chart);
}

InvolutivityResult involutivity_check(const std::vector<VectorField>& frame, const SampleGrid& grid) {
  if (frame.empty()) return {};
  const ChartPtr& chart = frame.front().chart;
  for (const auto& X : frame) require_same_chart(chart, X.chart, "frame");
  std::vector<std::tuple<int, int, VectorField>> brackets;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      brackets.emplace_back(static_cast<int>(i), static_cast<int>(j), lie_bracket(frame[i], frame[j]));
    }
  }
  const int n = chart->dim();
  auto results = parallel_map(grid.points.size(), [&](std::size_t p) -> std::optional<InvolutivityResult> {
    const Point& pt = grid.points[p];
    require_same_chart(chart, pt.chart, "grid point");
    Matrix m(0, n);
    for (const auto& X : frame) m.append_row(X.evaluate(pt));
    const int r = rank(m);
    if (r != static_cast<int>(frame.size())) {
      fail(ErrorCode::DependentFrame, "frame is dependent at " + point_to_string(pt));
    }
    for (const auto& [i, j, B] : brackets) {
      Vec b = B.evaluate(pt);
      Matrix aug = m;
      aug.append_row(b);
      if (rank(aug) != r) return InvolutivityResult{false, p, i, j, b};
    }
    return std::nullopt;
  });
  for (auto& r : results) {
    if (r) return *r;
  }
  return {};
}

// ---------------------------------------------------------------------------

std::vector<ReebFamily> reeb_solve(const PreparedSpec& prep, std::span<const Rational> x) {
  const GeometrySpec& s = prep.spec();
  if (!has_reeb(s.family)) {
    fail(ErrorCode::InvalidInput, "kind " + kind_name(s) + " has no Reeb vector fields");
  }
  const int n = s.chart->dim();
  PointStructure ps = prep.at(x);
  // ps.constraints are the 1-forms (xi first for cocontact), ps.pairings the
  // 2-forms whose contraction with R must vanish.
  std::vector<std::string> labels;
  const std::size_t m = ps.constraints.size();
  if (s.family == Family::Cocontact) {
    labels = {"R_xi", "R_eta"};
  } else if (m == 1) {
    labels = {"R"};
  } else {
    for (std::size_t i = 0; i < m; ++i) labels.push_back("R" + std::to_string(i + 1));
  }
  Matrix base(0, n);
  for (const auto& c : ps.constraints) base.append_row(c);
  for (const auto& p : ps.pairings) {
    for (int j = 0; j < n; ++j) {
      Vec row(n, Rational(0));
      for (int i = 0; i < n; ++i) row[i] = p.at({i, j});
      base.append_row(row);
    }
  }
  std::vector<Vec> kernel = nullspace(base, n);
  std::vector<ReebFamily> out;
  for (std::size_t i = 0; i < m; ++i) {
    Vec rhs(base.rows(), Rational(0));
    rhs[i] = 1;
    auto sol = solve_particular(base, rhs);
    if (!sol) {
      std::string where = "(";
      for (std::size_t c = 0; c < x.size(); ++c) where += (c ? ", " : "") + to_string(x[c]);
      fail(ErrorCode::NoReebAtPoint, labels[i] + " has no solution at " + where + ")");
    }
    out.push_back({labels[i], std::move(*sol), kernel});
  }
  return out;
}

std::vector<ReebFamily> reeb_solve(const GeometrySpec& spec, const Point& pt) {
  require_same_chart(spec.chart, pt.chart, "Reeb solve");
  return reeb_solve(PreparedSpec(spec), pt.coords);
}

}  // namespace coiso
