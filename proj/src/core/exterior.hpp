#pragma once

// Differential forms, vector fields and (1,1)-tensor fields over one chart.
// Forms are sparse maps from strictly increasing index tuples to Scalars;
// every sign goes through sort_with_sign.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "indices.hpp"
#include "pointwise.hpp"
#include "scalar.hpp"

namespace coiso {

class Form {
 public:
  using Coeffs = std::map<IndexTuple, Scalar>;

  Form(ChartPtr chart, int degree);

  static Form from_scalar(const Scalar& f);
  // dx^i
  static Form differential(const ChartPtr& chart, int i);
  // dx^{i_1} ^ ... ^ dx^{i_k}, tuple in any order.
  static Form basis(const ChartPtr& chart, IndexTuple idx);

  const ChartPtr& chart() const { return chart_; }
  int degree() const { return k_; }
  const Coeffs& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Scalar coefficient(IndexTuple idx) const;
  void add(IndexTuple idx, const Scalar& c);

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form operator-() const;

  Form lift(const ChartPtr& larger) const;
  // Applies f to every coefficient.
  template <class F>
  Form map_coeffs(F&& f) const {
    Form out(chart_, k_);
    for (const auto& [idx, c] : coeffs_) out.add(idx, f(c));
    return out;
  }

  // Round-trippable through parse_form, e.g. "dq^dp + z*dq^dz".
  std::string to_string() const;

  friend bool operator==(const Form& a, const Form& b);

 private:
  ChartPtr chart_;
  int k_;
  Coeffs coeffs_;
};

Form operator+(Form a, const Form& b);
Form operator-(Form a, const Form& b);
Form operator*(const Scalar& f, const Form& a);
Form operator*(const Rational& c, const Form& a);

struct VectorField {
  ChartPtr chart;
  std::vector<Scalar> components;

  static VectorField zero(const ChartPtr& chart);
  static VectorField coordinate(const ChartPtr& chart, int i);

  // X(f) = X^i d_i f
  Scalar apply(const Scalar& f) const;
  Vec evaluate(const Point& pt) const;
  Vec evaluate(std::span<const Rational> x) const;
  bool is_zero() const;
  std::string to_string() const;  // "d<coord>" stands for the coordinate field

  friend bool operator==(const VectorField& a, const VectorField& b);
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Scalar& f, const VectorField& X);

// Row = output coordinate, column = input coordinate.
struct TensorField11 {
  ChartPtr chart;
  std::vector<std::vector<Scalar>> m;

  static TensorField11 zero(const ChartPtr& chart);
  static TensorField11 identity(const ChartPtr& chart);

  int dim() const { return chart->dim(); }
  VectorField apply(const VectorField& X) const;
  Matrix evaluate(const Point& pt) const;

  friend bool operator==(const TensorField11& a, const TensorField11& b);
};

TensorField11 operator*(const TensorField11& a, const TensorField11& b);
TensorField11 operator-(const TensorField11& a, const TensorField11& b);

Form wedge(const Form& a, const Form& b);
Form exterior_derivative(const Form& a);
Form interior_product(const VectorField& X, const Form& a);
Form lie_derivative(const VectorField& X, const Form& a);
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// `images` are Scalars on chart A, one per coordinate of a's chart B.
Form pullback(const Form& a, const std::vector<Scalar>& images);

AlternatingTensor evaluate_form(const Form& a, const Point& pt);
AlternatingTensor evaluate_form(const Form& a, std::span<const Rational> x);

// Wedge power a^n; a^0 is the constant 1.
Form wedge_power(const Form& a, unsigned n);

// Form literal. Identifiers "d<coord>" are basis covectors unless they are
// coordinates themselves; "*" and "^" between forms both wedge. A zero
// result takes `expected_degree` when given.
Form parse_form(std::string_view text, const ChartPtr& chart,
                std::optional<int> expected_degree = std::nullopt);

// Same grammar; the covector "d<coord>" is read as the field d/d<coord>.
VectorField parse_vector_field(std::string_view text, const ChartPtr& chart);

// Double-precision copy of a form for the float layer.
class CompiledForm {
 public:
  CompiledForm() = default;
  explicit CompiledForm(const Form& a);

  int degree() const { return k_; }
  const std::vector<IndexTuple>& tuples() const { return tuples_; }
  // Coefficients at x, aligned with tuples().
  void evaluate(std::span<const double> x, std::vector<double>& out) const;

 private:
  int k_ = 0;
  std::vector<IndexTuple> tuples_;
  std::vector<CompiledScalar> coeffs_;
};

}  // namespace coiso
