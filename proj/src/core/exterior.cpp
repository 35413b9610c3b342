#include "exterior.hpp"

#include "errors.hpp"
#include "expr_parser.hpp"

namespace coiso {

Form::Form(ChartPtr chart, int degree) : chart_(std::move(chart)), k_(degree) {
  if (degree < 0) fail(ErrorCode::BadDegree, "negative form degree");
}

Form Form::from_scalar(const Scalar& f) {
  Form out(f.chart(), 0);
  out.add({}, f);
  return out;
}

Form Form::differential(const ChartPtr& chart, int i) {
  return basis(chart, {i});
}

Form Form::basis(const ChartPtr& chart, IndexTuple idx) {
  Form out(chart, static_cast<int>(idx.size()));
  out.add(std::move(idx), Scalar::constant(chart, 1));
  return out;
}

Scalar Form::coefficient(IndexTuple idx) const {
  if (static_cast<int>(idx.size()) != k_) fail(ErrorCode::BadDegree, "coefficient index arity");
  int s = sort_with_sign(idx);
  if (s == 0) return Scalar(chart_);
  auto it = coeffs_.find(idx);
  if (it == coeffs_.end()) return Scalar(chart_);
  return s > 0 ? it->second : -it->second;
}

void Form::add(IndexTuple idx, const Scalar& c) {
  if (c.is_zero()) return;
  require_same_chart(chart_, c.chart(), "form coefficient");
  if (static_cast<int>(idx.size()) != k_) fail(ErrorCode::BadDegree, "form index arity");
  for (int i : idx) {
    if (i < 0 || i >= chart_->dim()) fail(ErrorCode::IndexOutOfRange, "form index out of range");
  }
  int s = sort_with_sign(idx);
  if (s == 0) return;
  auto it = coeffs_.find(idx);
  if (it == coeffs_.end()) {
    coeffs_.emplace(std::move(idx), s > 0 ? c : -c);
    return;
  }
  if (s > 0) {
    it->second += c;
  } else {
    it->second -= c;
  }
  if (it->second.is_zero()) coeffs_.erase(it);
}

namespace {

// A zero form of another degree is accepted as the additive identity.
void check_addable(const Form& a, const Form& b) {
  require_same_chart(a.chart(), b.chart(), "form sum");
  if (a.degree() != b.degree() && !a.is_zero() && !b.is_zero()) {
    fail(ErrorCode::BadDegree, "sum of a " + std::to_string(a.degree()) + "-form and a " +
                                   std::to_string(b.degree()) + "-form");
  }
}

}  // namespace

Form& Form::operator+=(const Form& o) {
  check_addable(*this, o);
  if (is_zero()) k_ = o.k_;
  for (const auto& [idx, c] : o.coeffs_) add(idx, c);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  check_addable(*this, o);
  if (is_zero()) k_ = o.k_;
  for (const auto& [idx, c] : o.coeffs_) add(idx, -c);
  return *this;
}

Form Form::operator-() const {
  Form out = *this;
  for (auto& [idx, c] : out.coeffs_) c = -c;
  return out;
}

Form Form::lift(const ChartPtr& larger) const {
  Form out(larger, k_);
  for (const auto& [idx, c] : coeffs_) out.coeffs_.emplace(idx, c.lift(larger));
  return out;
}

std::string Form::to_string() const {
  if (coeffs_.empty()) return "0";
  if (k_ == 0) return coeffs_.begin()->second.to_string();
  std::string out;
  bool first = true;
  for (const auto& [idx, c] : coeffs_) {
    std::string basis_text;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) basis_text += "^";
      basis_text += "d" + chart_->names[idx[i]];
    }
    bool negative = false;
    std::string coeff;
    if (c.terms().size() == 1) {
      const auto& [e, v] = *c.terms().begin();
      negative = v < 0;
      std::string body = (negative ? -c : c).to_string();
      coeff = body == "1" ? "" : body + "*";
    } else {
      coeff = "(" + c.to_string() + ")*";
    }
    if (first) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    out += coeff + basis_text;
  }
  return out;
}

bool operator==(const Form& a, const Form& b) {
  if (!same_chart(a.chart(), b.chart())) return false;
  if (a.is_zero() && b.is_zero()) return true;
  return a.degree() == b.degree() && a.coeffs() == b.coeffs();
}

Form operator+(Form a, const Form& b) { return a += b; }
Form operator-(Form a, const Form& b) { return a -= b; }

Form operator*(const Scalar& f, const Form& a) {
  require_same_chart(f.chart(), a.chart(), "scalar times form");
  return a.map_coeffs([&](const Scalar& c) { return f * c; });
}

Form operator*(const Rational& c, const Form& a) {
  return a.map_coeffs([&](const Scalar& s) { return c * s; });
}

// ---------------------------------------------------------------------------

VectorField VectorField::zero(const ChartPtr& chart) {
  return {chart, std::vector<Scalar>(chart->dim(), Scalar(chart))};
}

VectorField VectorField::coordinate(const ChartPtr& chart, int i) {
  VectorField X = zero(chart);
  X.components.at(i) = Scalar::constant(chart, 1);
  return X;
}

Scalar VectorField::apply(const Scalar& f) const {
  require_same_chart(chart, f.chart(), "vector field on scalar");
  Scalar out(chart);
  for (int i = 0; i < chart->dim(); ++i) {
    if (components[i].is_zero()) continue;
    out += components[i] * f.derivative(i);
  }
  return out;
}

Vec VectorField::evaluate(const Point& pt) const {
  require_same_chart(chart, pt.chart, "vector field evaluation");
  return evaluate(std::span<const Rational>(pt.coords));
}

Vec VectorField::evaluate(std::span<const Rational> x) const {
  Vec v;
  v.reserve(components.size());
  for (const auto& c : components) v.push_back(c.evaluate(x));
  return v;
}

bool VectorField::is_zero() const {
  for (const auto& c : components) {
    if (!c.is_zero()) return false;
  }
  return true;
}

std::string VectorField::to_string() const {
  Form as_form(chart, 1);
  for (int i = 0; i < chart->dim(); ++i) as_form.add({i}, components[i]);
  return as_form.to_string();
}

bool operator==(const VectorField& a, const VectorField& b) {
  return same_chart(a.chart, b.chart) && a.components == b.components;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_chart(a.chart, b.chart, "vector field sum");
  VectorField out = a;
  for (std::size_t i = 0; i < out.components.size(); ++i) out.components[i] += b.components[i];
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_chart(a.chart, b.chart, "vector field difference");
  VectorField out = a;
  for (std::size_t i = 0; i < out.components.size(); ++i) out.components[i] -= b.components[i];
  return out;
}

VectorField operator*(const Scalar& f, const VectorField& X) {
  require_same_chart(f.chart(), X.chart, "scalar times vector field");
  VectorField out = X;
  for (auto& c : out.components) c = f * c;
  return out;
}

TensorField11 TensorField11::zero(const ChartPtr& chart) {
  const int n = chart->dim();
  return {chart, std::vector<std::vector<Scalar>>(n, std::vector<Scalar>(n, Scalar(chart)))};
}

TensorField11 TensorField11::identity(const ChartPtr& chart) {
  TensorField11 t = zero(chart);
  for (int i = 0; i < chart->dim(); ++i) t.m[i][i] = Scalar::constant(chart, 1);
  return t;
}

VectorField TensorField11::apply(const VectorField& X) const {
  require_same_chart(chart, X.chart, "tensor on vector field");
  VectorField out = VectorField::zero(chart);
  const int n = dim();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m[i][j].is_zero() || X.components[j].is_zero()) continue;
      out.components[i] += m[i][j] * X.components[j];
    }
  }
  return out;
}

Matrix TensorField11::evaluate(const Point& pt) const {
  require_same_chart(chart, pt.chart, "tensor evaluation");
  const int n = dim();
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = m[i][j].evaluate(pt);
  }
  return out;
}

bool operator==(const TensorField11& a, const TensorField11& b) {
  return same_chart(a.chart, b.chart) && a.m == b.m;
}

TensorField11 operator*(const TensorField11& a, const TensorField11& b) {
  require_same_chart(a.chart, b.chart, "tensor product");
  TensorField11 out = TensorField11::zero(a.chart);
  const int n = a.dim();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (a.m[i][k].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        if (b.m[k][j].is_zero()) continue;
        out.m[i][j] += a.m[i][k] * b.m[k][j];
      }
    }
  }
  return out;
}

TensorField11 operator-(const TensorField11& a, const TensorField11& b) {
  require_same_chart(a.chart, b.chart, "tensor difference");
  TensorField11 out = a;
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) out.m[i][j] -= b.m[i][j];
  }
  return out;
}

// ---------------------------------------------------------------------------

Form wedge(const Form& a, const Form& b) {
  require_same_chart(a.chart(), b.chart(), "wedge");
  Form out(a.chart(), a.degree() + b.degree());
  if (out.degree() > a.chart()->dim()) return out;
  for (const auto& [ia, ca] : a.coeffs()) {
    for (const auto& [ib, cb] : b.coeffs()) {
      IndexTuple idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(std::move(idx), ca * cb);
    }
  }
  return out;
}

Form exterior_derivative(const Form& a) {
  Form out(a.chart(), a.degree() + 1);
  const int n = a.chart()->dim();
  for (const auto& [idx, c] : a.coeffs()) {
    for (int j = 0; j < n; ++j) {
      if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
      Scalar dc = c.derivative(j);
      if (dc.is_zero()) continue;
      IndexTuple full{j};
      full.insert(full.end(), idx.begin(), idx.end());
      out.add(std::move(full), dc);
    }
  }
  return out;
}

Form interior_product(const VectorField& X, const Form& a) {
  require_same_chart(X.chart, a.chart(), "interior product");
  if (a.degree() == 0) fail(ErrorCode::DegreeZero, "interior product of a 0-form");
  const int k = a.degree();
  Form out(a.chart(), k - 1);
  for (const auto& [idx, c] : a.coeffs()) {
    for (int p = 0; p < k; ++p) {
      const Scalar& xi = X.components[idx[p]];
      if (xi.is_zero()) continue;
      IndexTuple rest;
      rest.reserve(k - 1);
      for (int j = 0; j < k; ++j) {
        if (j != p) rest.push_back(idx[j]);
      }
      Scalar term = xi * c;
      out.add(std::move(rest), p % 2 == 0 ? term : -term);
    }
  }
  return out;
}

Form lie_derivative(const VectorField& X, const Form& a) {
  require_same_chart(X.chart, a.chart(), "Lie derivative");
  Form out = interior_product(X, exterior_derivative(a));
  if (a.degree() > 0) out += exterior_derivative(interior_product(X, a));
  return out;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  require_same_chart(X.chart, Y.chart, "Lie bracket");
  VectorField out = VectorField::zero(X.chart);
  for (int i = 0; i < X.chart->dim(); ++i) {
    out.components[i] = X.apply(Y.components[i]) - Y.apply(X.components[i]);
  }
  return out;
}

Form pullback(const Form& a, const std::vector<Scalar>& images) {
  const ChartPtr& source = a.chart();
  if (static_cast<int>(images.size()) != source->dim()) {
    fail(ErrorCode::DimensionMismatch, "pullback needs one image per source coordinate");
  }
  if (images.empty()) return a;
  const ChartPtr& target = images.front().chart();
  for (const auto& im : images) require_same_chart(target, im.chart(), "pullback images");

  std::vector<std::optional<Form>> dphi(images.size());
  auto differential_of = [&](int b) -> const Form& {
    if (!dphi[b]) dphi[b] = exterior_derivative(Form::from_scalar(images[b]));
    return *dphi[b];
  };
  // A zero image has zero differential but from_scalar gives a degree-0 zero.
  Form out(target, a.degree());
  for (const auto& [idx, c] : a.coeffs()) {
    Form term = Form::from_scalar(c.substitute(images));
    for (int b : idx) {
      const Form& db = differential_of(b);
      if (db.is_zero()) {
        term = Form(target, term.degree() + 1);
        break;
      }
      term = wedge(term, db);
    }
    if (!term.is_zero()) out += term;
  }
  return out;
}

AlternatingTensor evaluate_form(const Form& a, const Point& pt) {
  require_same_chart(a.chart(), pt.chart, "form evaluation");
  return evaluate_form(a, std::span<const Rational>(pt.coords));
}

AlternatingTensor evaluate_form(const Form& a, std::span<const Rational> x) {
  AlternatingTensor t(a.chart()->dim(), a.degree());
  for (const auto& [idx, c] : a.coeffs()) t.add(idx, c.evaluate(x));
  return t;
}

Form wedge_power(const Form& a, unsigned n) {
  Form out = Form::from_scalar(Scalar::constant(a.chart(), 1));
  for (unsigned i = 0; i < n; ++i) out = wedge(out, a);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Form eval_form(const ExprNode& n, const ChartPtr& chart) {
  using K = ExprNode::Kind;
  switch (n.kind) {
    case K::Number:
      return Form::from_scalar(Scalar::constant(chart, n.number));
    case K::Ident: {
      if (auto idx = chart->index_of(n.name)) return Form::from_scalar(Scalar::coordinate(chart, *idx));
      if (n.name.size() > 1 && n.name[0] == 'd') {
        if (auto idx = chart->index_of(std::string_view(n.name).substr(1))) {
          return Form::differential(chart, *idx);
        }
      }
      fail(ErrorCode::UnknownCoordinate, n.name);
    }
    case K::Add:
      return eval_form(*n.children[0], chart) + eval_form(*n.children[1], chart);
    case K::Sub:
      return eval_form(*n.children[0], chart) - eval_form(*n.children[1], chart);
    case K::Neg:
      return -eval_form(*n.children[0], chart);
    case K::Mul:
    case K::Wedge:
      return wedge(eval_form(*n.children[0], chart), eval_form(*n.children[1], chart));
    case K::Pow: {
      Form base = eval_form(*n.children[0], chart);
      if (base.degree() != 0 && !base.is_zero()) {
        throw SyntaxError(n.offset, {"a scalar base for '^' with an integer exponent"}, "form");
      }
      return Form::from_scalar(base.coefficient({}).pow(n.exponent));
    }
  }
  fail(ErrorCode::InvalidInput, "unreachable expression node");
}

}  // namespace

Form parse_form(std::string_view text, const ChartPtr& chart, std::optional<int> expected_degree) {
  auto tree = parse_expression(text);
  Form f = eval_form(*tree, chart);
  if (expected_degree && f.degree() != *expected_degree) {
    if (f.is_zero()) return Form(chart, *expected_degree);
    fail(ErrorCode::BadDegree, "expected a " + std::to_string(*expected_degree) + "-form, got a " +
                                   std::to_string(f.degree()) + "-form");
  }
  return f;
}

VectorField parse_vector_field(std::string_view text, const ChartPtr& chart) {
  Form f = parse_form(text, chart, 1);
  VectorField X = VectorField::zero(chart);
  for (int i = 0; i < chart->dim(); ++i) X.components[i] = f.coefficient({i});
  return X;
}

CompiledForm::CompiledForm(const Form& a) : k_(a.degree()) {
  for (const auto& [idx, c] : a.coeffs()) {
    tuples_.push_back(idx);
    coeffs_.emplace_back(c);
  }
}

void CompiledForm::evaluate(std::span<const double> x, std::vector<double>& out) const {
  out.resize(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i](x);
}

}  // namespace coiso
