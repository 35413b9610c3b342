#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace coiso {

// Always canonical: gcd(|num|, den) = 1 and den > 0.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
// Exact conversion of a finite double.
Rational from_double(double x);

}  // namespace coiso
