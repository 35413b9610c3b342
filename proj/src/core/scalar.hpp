#pragma once

// Exact multivariate polynomials with rational coefficients over a named
// coordinate chart. Every coefficient in the engine is one of these.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rational.hpp"

namespace coiso {

struct Chart {
  std::string id;
  std::vector<std::string> names;

  int dim() const { return static_cast<int>(names.size()); }
  std::optional<int> index_of(std::string_view name) const;
};

using ChartPtr = std::shared_ptr<const Chart>;

// Names must be unique identifiers and the list nonempty.
ChartPtr make_chart(std::string id, std::vector<std::string> names);
bool same_chart(const ChartPtr& a, const ChartPtr& b);
void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what);

struct Point {
  ChartPtr chart;
  std::vector<Rational> coords;

  Point(ChartPtr c, std::vector<Rational> x);
};

using Exponent = std::vector<std::uint32_t>;

// Graded lexicographic: total degree first, then earlier coordinates dominate.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class Scalar {
 public:
  using TermMap = std::map<Exponent, Rational, GradedLex>;

  explicit Scalar(ChartPtr chart);
  Scalar(ChartPtr chart, TermMap terms);  // drops zero coefficients

  static Scalar constant(ChartPtr chart, const Rational& c);
  static Scalar coordinate(ChartPtr chart, int index);

  const ChartPtr& chart() const { return chart_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> constant_value() const;
  unsigned total_degree() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator*=(const Rational& c);
  Scalar operator-() const;

  Scalar pow(unsigned n) const;
  Scalar derivative(int coord_index) const;
  Rational evaluate(const Point& pt) const;
  Rational evaluate(std::span<const Rational> coords) const;

  // Composition: coordinate i is replaced by images[i]; the result lives on
  // the images' chart.
  Scalar substitute(const std::vector<Scalar>& images) const;

  // Same polynomial on a chart whose first dim() coordinates are ours.
  Scalar lift(const ChartPtr& larger) const;

  std::string to_string() const;

  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  void add_term(const Exponent& e, const Rational& c);

  ChartPtr chart_;
  TermMap terms_;
};

Scalar operator+(Scalar a, const Scalar& b);
Scalar operator-(Scalar a, const Scalar& b);
Scalar operator*(const Scalar& a, const Scalar& b);
Scalar operator*(const Rational& c, Scalar a);

Scalar parse_scalar(std::string_view text, const ChartPtr& chart);

// Double-precision copy of a Scalar for the float layer.
class CompiledScalar {
 public:
  CompiledScalar() = default;
  explicit CompiledScalar(const Scalar& s);

  double operator()(std::span<const double> x) const;
  bool is_zero() const { return coeffs_.empty(); }

 private:
  std::vector<double> coeffs_;
  std::vector<std::vector<std::pair<int, unsigned>>> powers_;
};

}  // namespace coiso
