#include "moser.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "errors.hpp"
#include "parallel.hpp"

namespace coiso {

namespace {

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

Form homotopy_operator(const Form& omega, const std::vector<int>& fiber) {
  const ChartPtr& chart = omega.chart();
  if (omega.degree() == 0) return Form(chart, 0);
  Form out(chart, omega.degree() - 1);
  for (const auto& [idx, c] : omega.coeffs()) {
    std::vector<int> dmu_positions;
    for (std::size_t p = 0; p < idx.size(); ++p) {
      if (contains(fiber, idx[p])) dmu_positions.push_back(static_cast<int>(p));
    }
    if (dmu_positions.empty()) continue;
    for (const auto& [e, coeff] : c.terms()) {
      unsigned m = static_cast<unsigned>(dmu_positions.size());
      for (int f : fiber) m += e[f];
      for (int p : dmu_positions) {
        IndexTuple rest;
        for (std::size_t j = 0; j < idx.size(); ++j) {
          if (static_cast<int>(j) != p) rest.push_back(idx[j]);
        }
        Exponent e2 = e;
        e2[idx[p]] += 1;
        Rational v = coeff / m;
        if (p % 2 == 1) v = -v;
        Scalar::TermMap t;
        t.emplace(std::move(e2), v);
        out.add(std::move(rest), Scalar(chart, std::move(t)));
      }
    }
  }
  return out;
}

Form base_part(const Form& omega, const std::vector<int>& fiber) {
  const ChartPtr& chart = omega.chart();
  Form out(chart, omega.degree());
  for (const auto& [idx, c] : omega.coeffs()) {
    if (std::any_of(idx.begin(), idx.end(), [&](int i) { return contains(fiber, i); })) continue;
    Scalar::TermMap t;
    for (const auto& [e, coeff] : c.terms()) {
      if (std::all_of(fiber.begin(), fiber.end(), [&, &ex = e](int f) { return ex[f] == 0; })) t.emplace(e, coeff);
    }
    out.add(idx, Scalar(chart, std::move(t)));
  }
  return out;
}

HomotopyPrimitive fiber_homotopy_primitive(const Form& omega, const std::vector<int>& fiber) {
  Form d = exterior_derivative(omega);
  if (!d.is_zero()) fail(ErrorCode::NotClosed, "d of the form is " + d.to_string());
  Form b = base_part(omega, fiber);
  if (!b.is_zero()) fail(ErrorCode::NotVanishingOnSection, "form restricts to " + b.to_string() + " on mu = 0");
  return {homotopy_operator(omega, fiber), omega};
}

MoserRun make_moser_run(Form omega1, Form omega2, std::vector<int> fiber, std::vector<Point> samples, int steps,
                        double tolerance, double box) {
  if (steps < 1) fail(ErrorCode::InvalidInput, "steps must be >= 1");
  if (!(tolerance > 0)) fail(ErrorCode::InvalidInput, "tolerance must be > 0");
  if (!(box > 0)) fail(ErrorCode::InvalidInput, "box must be > 0");
  require_same_chart(omega1.chart(), omega2.chart(), "Moser pair");
  if (omega1.degree() != 2 || omega2.degree() != 2) {
    fail(ErrorCode::BadDegree, "Moser flow needs a pair of 2-forms");
  }
  HomotopyPrimitive prim = fiber_homotopy_primitive(omega2 - omega1, fiber);
  return MoserRun{std::move(omega1), std::move(omega2), std::move(fiber), std::move(prim), std::move(samples),
                  steps, tolerance, box};
}

Vec moser_vector_field_at(const MoserRun& run, const Point& pt, const Rational& t) {
  require_same_chart(run.omega1.chart(), pt.chart, "Moser point");
  const int n = pt.chart->dim();
  Form omega_t = run.omega1 + t * (run.omega2 - run.omega1);
  AlternatingTensor w = evaluate_form(omega_t, pt);
  Vec theta = evaluate_form(run.primitive.theta, pt).as_covector();
  Matrix a(n, n);
  Vec rhs(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(j, i) = w.at({i, j});
    rhs[j] = -theta[j];
  }
  if (!nullspace(a, n).empty()) {
    fail(ErrorCode::DegenerateAtPoint, "omega_t is degenerate at t = " + to_string(t) + ", " + point_to_string(pt));
  }
  return *solve_particular(a, rhs);
}

Vec contact_moser_vector_field_at(const Form& eta1, const Form& eta2, const Point& pt, const Rational& t) {
  require_same_chart(eta1.chart(), pt.chart, "Moser point");
  const int n = pt.chart->dim();
  Form eta_t = eta1 + t * (eta2 - eta1);
  Form deta_t = exterior_derivative(eta_t);
  GeometrySpec s;
  s.family = Family::Contact;
  s.nondegenerate = true;
  s.chart = pt.chart;
  s.etas = {eta_t};
  auto reeb = reeb_solve(s, pt);
  if (!reeb[0].kernel.empty()) {
    fail(ErrorCode::DegenerateAtPoint, "eta_t is not contact at t = " + to_string(t) + ", " + point_to_string(pt));
  }
  Vec e = evaluate_form(eta_t, pt).as_covector();
  Vec edot = evaluate_form(eta2 - eta1, pt).as_covector();
  AlternatingTensor de = evaluate_form(deta_t, pt);
  Rational h = dot(edot, reeb[0].particular);
  Matrix a(0, n);
  Vec rhs;
  a.append_row(e);
  rhs.push_back(0);
  for (int j = 0; j < n; ++j) {
    Vec row(n);
    for (int i = 0; i < n; ++i) row[i] = de.at({i, j});
    a.append_row(row);
    rhs.push_back(h * e[j] - edot[j]);
  }
  auto sol = solve_particular(a, rhs);
  if (!sol || !nullspace(a, n).empty()) {
    fail(ErrorCode::DegenerateAtPoint, "no unique Moser field at t = " + to_string(t) + ", " + point_to_string(pt));
  }
  return *sol;
}

// ---------------------------------------------------------------------------

namespace {

// Float copy of the Moser system.
class FloatMoser {
 public:
  explicit FloatMoser(const MoserRun& run)
      : n_(run.omega1.chart()->dim()),
        w1_(run.omega1),
        dw_(run.omega2 - run.omega1),
        theta_(run.primitive.theta) {}

  int dim() const { return n_; }

  // Returns false when omega_t is numerically singular at x.
  bool field(double t, const std::vector<double>& x, std::vector<double>& out) {
    const int n = n_;
    a_.assign(static_cast<std::size_t>(n) * n, 0.0);
    w1_.evaluate(x, c1_);
    dw_.evaluate(x, c2_);
    theta_.evaluate(x, c3_);
    auto put = [&](const std::vector<IndexTuple>& tuples, const std::vector<double>& c, double scale) {
      for (std::size_t k = 0; k < tuples.size(); ++k) {
        int i = tuples[k][0];
        int j = tuples[k][1];
        // row j, column i holds omega(e_i, e_j)
        a_[static_cast<std::size_t>(j) * n + i] += scale * c[k];
        a_[static_cast<std::size_t>(i) * n + j] -= scale * c[k];
      }
    };
    put(w1_.tuples(), c1_, 1.0);
    put(dw_.tuples(), c2_, t);
    b_.assign(n, 0.0);
    for (std::size_t k = 0; k < theta_.tuples().size(); ++k) b_[theta_.tuples()[k][0]] = -c3_[k];
    return solve(out);
  }

 private:
  bool solve(std::vector<double>& x) {
    const int n = n_;
    double scale = 0.0;
    for (double v : a_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return false;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int r = c + 1; r < n; ++r) {
        if (std::abs(a_[r * n + c]) > std::abs(a_[p * n + c])) p = r;
      }
      if (std::abs(a_[p * n + c]) < 1e-13 * scale) return false;
      if (p != c) {
        for (int k = 0; k < n; ++k) std::swap(a_[p * n + k], a_[c * n + k]);
        std::swap(b_[p], b_[c]);
      }
      for (int r = c + 1; r < n; ++r) {
        double f = a_[r * n + c] / a_[c * n + c];
        if (f == 0.0) continue;
        for (int k = c; k < n; ++k) a_[r * n + k] -= f * a_[c * n + k];
        b_[r] -= f * b_[c];
      }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
      double s = b_[r];
      for (int k = r + 1; k < n; ++k) s -= a_[r * n + k] * x[k];
      x[r] = s / a_[r * n + r];
    }
    return true;
  }

  int n_;
  CompiledForm w1_, dw_, theta_;
  std::vector<double> a_, b_, c1_, c2_, c3_;
};

struct Abort {
  double t;
  std::string why;
};

// Classic RK4 from t = 0 to 1; returns psi_1(x) or the abort time.
std::variant<std::vector<double>, Abort> flow(FloatMoser& sys, std::vector<double> x, int steps) {
  const int n = sys.dim();
  const double dt = 1.0 / steps;
  std::vector<double> k1, k2, k3, k4, y(n);
  for (int s = 0; s < steps; ++s) {
    const double t = s * dt;
    if (!sys.field(t, x, k1)) return Abort{t, "omega_t is degenerate"};
    for (int i = 0; i < n; ++i) y[i] = x[i] + 0.5 * dt * k1[i];
    if (!sys.field(t + 0.5 * dt, y, k2)) return Abort{t, "omega_t is degenerate"};
    for (int i = 0; i < n; ++i) y[i] = x[i] + 0.5 * dt * k2[i];
    if (!sys.field(t + 0.5 * dt, y, k3)) return Abort{t, "omega_t is degenerate"};
    for (int i = 0; i < n; ++i) y[i] = x[i] + dt * k3[i];
    if (!sys.field(t + dt, y, k4)) return Abort{t, "omega_t is degenerate"};
    for (int i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(x[i])) return Abort{t, "non-finite state"};
    }
  }
  return x;
}

double det(std::vector<double> m, int k) {
  double d = 1.0;
  for (int c = 0; c < k; ++c) {
    int p = c;
    for (int r = c + 1; r < k; ++r) {
      if (std::abs(m[r * k + c]) > std::abs(m[p * k + c])) p = r;
    }
    if (m[p * k + c] == 0.0) return 0.0;
    if (p != c) {
      for (int j = 0; j < k; ++j) std::swap(m[p * k + j], m[c * k + j]);
      d = -d;
    }
    d *= m[c * k + c];
    for (int r = c + 1; r < k; ++r) {
      double f = m[r * k + c] / m[c * k + c];
      for (int j = c; j < k; ++j) m[r * k + j] -= f * m[c * k + j];
    }
  }
  return d;
}

}  // namespace

MoserReport moser_flow_verify(const MoserRun& run) {
  const ChartPtr& chart = run.omega1.chart();
  const int n = chart->dim();
  const double h = 1e-4 * run.box;
  const int k = run.omega2.degree();
  const CompiledForm w1(run.omega1);
  const CompiledForm w2(run.omega2);
  const auto basis = increasing_tuples(n, k);

  MoserReport report;
  report.samples = parallel_map(run.samples.size(), [&](std::size_t s) {
    FloatMoser sys(run);
    MoserSample out;
    std::vector<double> x0;
    for (const auto& c : run.samples[s].coords) x0.push_back(to_double(c));
    out.point = x0;

    std::vector<double> center;
    std::vector<std::vector<double>> plus(n), minus(n);
    auto run_one = [&](std::vector<double> x, std::vector<double>& dest) -> bool {
      auto r = flow(sys, std::move(x), run.steps);
      if (auto* a = std::get_if<Abort>(&r)) {
        out.aborted_at_t = a->t;
        out.diagnostic = a->why;
        return false;
      }
      dest = std::get<std::vector<double>>(std::move(r));
      return true;
    };
    if (!run_one(x0, center)) return out;
    for (int j = 0; j < n; ++j) {
      auto xp = x0;
      auto xm = x0;
      xp[j] += h;
      xm[j] -= h;
      if (!run_one(xp, plus[j]) || !run_one(xm, minus[j])) return out;
    }
    // J[i][j] = d psi^i / d x^j
    std::vector<double> J(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) J[i * n + j] = (plus[j][i] - minus[j][i]) / (2.0 * h);
    }
    std::vector<double> c2, c1;
    w2.evaluate(center, c2);
    w1.evaluate(x0, c1);
    double err = 0.0;
    std::vector<double> sub(static_cast<std::size_t>(k) * k);
    for (const auto& T : basis) {
      double v = 0.0;
      for (std::size_t t = 0; t < w2.tuples().size(); ++t) {
        const auto& I = w2.tuples()[t];
        for (int r = 0; r < k; ++r) {
          for (int c = 0; c < k; ++c) sub[r * k + c] = J[I[r] * n + T[c]];
        }
        v += c2[t] * det(sub, k);
      }
      auto it = std::find(w1.tuples().begin(), w1.tuples().end(), T);
      if (it != w1.tuples().end()) v -= c1[it - w1.tuples().begin()];
      err = std::max(err, std::abs(v));
    }
    out.max_error = err;
    out.pass = std::isfinite(err) && err <= run.tolerance;
    return out;
  });
  for (const auto& s : report.samples) {
    report.max_error = std::max(report.max_error, s.max_error);
    if (!s.pass) report.pass = false;
  }
  return report;
}

ProportionalityReport reeb_proportionality_check(const GeometrySpec& a, const GeometrySpec& b,
                                                 const SampleGrid& grid) {
  require_same_chart(a.chart, b.chart, "Reeb proportionality");
  if (a.family != b.family) fail(ErrorCode::InvalidInput, "Reeb proportionality needs two structures of one kind");
  PreparedSpec pa(a), pb(b);
  const int n = a.chart->dim();
  auto per_point = parallel_map(grid.points.size(), [&](std::size_t p) -> std::pair<bool, std::string> {
    const auto& x = grid.points[p].coords;
    auto ra = reeb_solve(pa, x);
    auto rb = reeb_solve(pb, x);
    for (std::size_t f = 0; f < ra.size(); ++f) {
      const Vec& u = ra[f].particular;
      const Vec& v = rb[f].particular;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (u[i] * v[j] - u[j] * v[i] != 0) return {false, ra[f].label};
        }
      }
    }
    return {true, ""};
  });
  ProportionalityReport r;
  for (std::size_t p = 0; p < per_point.size(); ++p) {
    r.proportional.push_back(per_point[p].first);
    if (!per_point[p].first && !r.witness) {
      r.witness = p;
      r.witness_label = per_point[p].second;
      r.all_proportional = false;
    }
  }
  return r;
}

}  // namespace coiso
