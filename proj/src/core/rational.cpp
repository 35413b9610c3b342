#include "rational.hpp"

#include <cmath>

#include "errors.hpp"

namespace coiso {

Rational make_rational(long num, long den) {
  if (den == 0) fail(ErrorCode::InvalidInput, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  Rational q;
  std::string s(text);
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
    fail(ErrorCode::InvalidInput, "not a rational number: '" + s + "'");
  }
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

double to_double(const Rational& q) { return q.get_d(); }

Rational from_double(double x) {
  if (!std::isfinite(x)) fail(ErrorCode::NonFiniteState, "non-finite value");
  return Rational(x);
}

}  // namespace coiso
