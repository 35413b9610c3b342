#include "scalar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "errors.hpp"
#include "expr_parser.hpp"

namespace coiso {

std::optional<int> Chart::index_of(std::string_view name) const {
  for (int i = 0; i < dim(); ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

ChartPtr make_chart(std::string id, std::vector<std::string> names) {
  if (names.empty()) fail(ErrorCode::InvalidInput, "chart has no coordinates");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!is_identifier(n)) fail(ErrorCode::InvalidInput, "bad coordinate name '" + n + "'");
    if (!seen.insert(n).second) fail(ErrorCode::InvalidInput, "duplicate coordinate '" + n + "'");
  }
  return std::make_shared<const Chart>(Chart{std::move(id), std::move(names)});
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
  return a == b || (a && b && a->names == b->names);
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what) {
  if (!same_chart(a, b)) {
    fail(ErrorCode::ChartMismatch, std::string(what) + ": operands live on different charts");
  }
}

Point::Point(ChartPtr c, std::vector<Rational> x) : chart(std::move(c)), coords(std::move(x)) {
  if (static_cast<int>(coords.size()) != chart->dim()) {
    fail(ErrorCode::DimensionMismatch, "point has " + std::to_string(coords.size()) +
                                           " coordinates, chart has " +
                                           std::to_string(chart->dim()));
  }
}

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  auto da = std::accumulate(a.begin(), a.end(), 0u);
  auto db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da < db;
  // Among equal degree, a monomial with a larger power of an earlier
  // coordinate sorts later (is "bigger").
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Scalar::Scalar(ChartPtr chart) : chart_(std::move(chart)) {}

Scalar::Scalar(ChartPtr chart, TermMap terms) : chart_(std::move(chart)) {
  for (auto& [e, c] : terms) {
    if (static_cast<int>(e.size()) != chart_->dim()) {
      fail(ErrorCode::DimensionMismatch, "exponent length differs from chart dimension");
    }
    if (c != 0) terms_.emplace(e, c);
  }
}

Scalar Scalar::constant(ChartPtr chart, const Rational& c) {
  Scalar s(chart);
  s.add_term(Exponent(chart->dim(), 0), c);
  return s;
}

Scalar Scalar::coordinate(ChartPtr chart, int index) {
  if (index < 0 || index >= chart->dim()) {
    fail(ErrorCode::IndexOutOfRange, "coordinate index " + std::to_string(index));
  }
  Exponent e(chart->dim(), 0);
  e[index] = 1;
  Scalar s(chart);
  s.add_term(e, 1);
  return s;
}

std::optional<Rational> Scalar::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1) {
    const auto& [e, c] = *terms_.begin();
    if (std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; })) return c;
  }
  return std::nullopt;
}

unsigned Scalar::total_degree() const {
  if (terms_.empty()) return 0;
  const auto& e = terms_.rbegin()->first;
  return std::accumulate(e.begin(), e.end(), 0u);
}

void Scalar::add_term(const Exponent& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Scalar& Scalar::operator+=(const Scalar& o) {
  require_same_chart(chart_, o.chart_, "add");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  require_same_chart(chart_, o.chart_, "sub");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  *this = *this * o;
  return *this;
}

Scalar& Scalar::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
Scalar operator*(const Rational& c, Scalar a) { return a *= c; }

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same_chart(a.chart(), b.chart(), "mul");
  Scalar::TermMap out;
  const std::size_t n = static_cast<std::size_t>(a.chart()->dim());
  Exponent e(n);
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = out.try_emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  return Scalar(a.chart(), std::move(out));
}

Scalar Scalar::pow(unsigned n) const {
  Scalar result = constant(chart_, 1);
  Scalar base = *this;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Scalar Scalar::derivative(int coord_index) const {
  if (coord_index < 0 || coord_index >= chart_->dim()) {
    fail(ErrorCode::IndexOutOfRange, "derivative index " + std::to_string(coord_index));
  }
  Scalar r(chart_);
  for (const auto& [e, c] : terms_) {
    if (e[coord_index] == 0) continue;
    Exponent d = e;
    d[coord_index] -= 1;
    r.add_term(d, c * e[coord_index]);
  }
  return r;
}

Rational Scalar::evaluate(const Point& pt) const {
  require_same_chart(chart_, pt.chart, "evaluate");
  return evaluate(std::span<const Rational>(pt.coords));
}

Rational Scalar::evaluate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != chart_->dim()) {
    fail(ErrorCode::DimensionMismatch, "evaluation point has wrong dimension");
  }
  // Power tables per coordinate, then a sum of products.
  std::vector<std::vector<Rational>> powers(x.size());
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto& table = powers[i];
      if (table.empty()) table.push_back(1);
      while (table.size() <= e[i]) table.push_back(table.back() * x[i]);
    }
  }
  Rational sum = 0;
  Rational term;
  for (const auto& [e, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (e[i] != 0) term *= powers[i][e[i]];
    }
    sum += term;
  }
  return sum;
}

Scalar Scalar::substitute(const std::vector<Scalar>& images) const {
  if (static_cast<int>(images.size()) != chart_->dim()) {
    fail(ErrorCode::DimensionMismatch, "substitute needs one image per coordinate");
  }
  if (images.empty()) return *this;
  const ChartPtr& target = images.front().chart();
  for (const auto& im : images) require_same_chart(target, im.chart(), "substitute");

  std::vector<std::vector<Scalar>> powers(images.size());
  Scalar result(target);
  for (const auto& [e, c] : terms_) {
    Scalar term = Scalar::constant(target, c);
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (e[i] == 0) continue;
      auto& table = powers[i];
      if (table.empty()) table.push_back(Scalar::constant(target, 1));
      while (table.size() <= e[i]) table.push_back(table.back() * images[i]);
      term = term * table[e[i]];
    }
    result += term;
  }
  return result;
}

Scalar Scalar::lift(const ChartPtr& larger) const {
  if (larger->dim() < chart_->dim()) {
    fail(ErrorCode::DimensionMismatch, "lift target chart is smaller");
  }
  for (int i = 0; i < chart_->dim(); ++i) {
    if (larger->names[i] != chart_->names[i]) {
      fail(ErrorCode::ChartMismatch, "lift target chart does not extend the source chart");
    }
  }
  TermMap out;
  for (const auto& [e, c] : terms_) {
    Exponent big(larger->dim(), 0);
    std::copy(e.begin(), e.end(), big.begin());
    out.emplace(std::move(big), c);
  }
  return Scalar(larger, std::move(out));
}

std::string Scalar::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    bool negative = c < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += chart_->names[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += coiso::to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += coiso::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

bool operator==(const Scalar& a, const Scalar& b) {
  return same_chart(a.chart_, b.chart_) && a.terms_ == b.terms_;
}

namespace {

Scalar eval_scalar(const ExprNode& n, const ChartPtr& chart) {
  switch (n.kind) {
    case ExprNode::Kind::Number:
      return Scalar::constant(chart, n.number);
    case ExprNode::Kind::Ident: {
      auto idx = chart->index_of(n.name);
      if (!idx) fail(ErrorCode::UnknownCoordinate, n.name);
      return Scalar::coordinate(chart, *idx);
    }
    case ExprNode::Kind::Add:
      return eval_scalar(*n.children[0], chart) + eval_scalar(*n.children[1], chart);
    case ExprNode::Kind::Sub:
      return eval_scalar(*n.children[0], chart) - eval_scalar(*n.children[1], chart);
    case ExprNode::Kind::Neg:
      return -eval_scalar(*n.children[0], chart);
    case ExprNode::Kind::Mul:
      return eval_scalar(*n.children[0], chart) * eval_scalar(*n.children[1], chart);
    case ExprNode::Kind::Pow:
      return eval_scalar(*n.children[0], chart).pow(n.exponent);
    case ExprNode::Kind::Wedge:
      throw SyntaxError(n.offset, {"'^' followed by an unsigned integer"}, "^");
  }
  fail(ErrorCode::InvalidInput, "unreachable expression node");
}

}  // namespace

Scalar parse_scalar(std::string_view text, const ChartPtr& chart) {
  auto tree = parse_expression(text);
  return eval_scalar(*tree, chart);
}

CompiledScalar::CompiledScalar(const Scalar& s) {
  for (const auto& [e, c] : s.terms()) {
    coeffs_.push_back(to_double(c));
    std::vector<std::pair<int, unsigned>> p;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) p.emplace_back(static_cast<int>(i), e[i]);
    }
    powers_.push_back(std::move(p));
  }
}

double CompiledScalar::operator()(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    double v = coeffs_[t];
    for (const auto& [i, k] : powers_[t]) {
      double xi = x[i];
      for (unsigned j = 0; j < k; ++j) v *= xi;
    }
    sum += v;
  }
  return sum;
}

}  // namespace coiso
