#pragma once

// Seeded generators and independent oracles shared by the unit tests and the
// acceptance binary.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "exterior.hpp"
#include "pointwise.hpp"
#include "scalar.hpp"

namespace coiso::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Small nonzero rational p/q with |p| <= 5, q in 1..3.
inline Rational small_rational(Rng& rng) {
  int p = 0;
  while (p == 0) p = uniform(rng, -5, 5);
  return make_rational(p, uniform(rng, 1, 3));
}

inline ChartPtr numbered_chart(int n, const std::string& prefix = "x") {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i + 1));
  return make_chart(prefix, names);
}

inline Scalar random_scalar(Rng& rng, const ChartPtr& chart, int max_degree, int max_terms) {
  Scalar s(chart);
  const int terms = uniform(rng, 1, max_terms);
  for (int t = 0; t < terms; ++t) {
    Scalar m = Scalar::constant(chart, small_rational(rng));
    const int deg = uniform(rng, 0, max_degree);
    for (int d = 0; d < deg; ++d) m *= Scalar::coordinate(chart, uniform(rng, 0, chart->dim() - 1));
    s += m;
  }
  return s;
}

inline Form random_form(Rng& rng, const ChartPtr& chart, int degree, int coeff_degree, int max_terms) {
  Form a(chart, degree);
  const auto tuples = increasing_tuples(chart->dim(), degree);
  if (tuples.empty()) return a;
  const int terms = uniform(rng, 1, max_terms);
  for (int t = 0; t < terms; ++t) {
    const auto& idx = tuples[uniform(rng, 0, static_cast<int>(tuples.size()) - 1)];
    a.add(idx, random_scalar(rng, chart, coeff_degree, 2));
  }
  return a;
}

inline VectorField random_vector_field(Rng& rng, const ChartPtr& chart, int coeff_degree) {
  VectorField X = VectorField::zero(chart);
  for (auto& c : X.components) {
    if (uniform(rng, 0, 2) == 0) continue;
    c = random_scalar(rng, chart, coeff_degree, 2);
  }
  return X;
}

// Coordinate formula for the Lie derivative, independent of Cartan's formula:
// L_X (a_I dx^I) = X(a_I) dx^I + a_I sum_p dx^{i_1} ^ .. ^ dX^{i_p} ^ .. ^ dx^{i_k}.
inline Form lie_derivative_oracle(const VectorField& X, const Form& a) {
  const ChartPtr& chart = a.chart();
  Form out(chart, a.degree());
  for (const auto& [idx, c] : a.coeffs()) {
    out.add(idx, X.apply(c));
    for (std::size_t p = 0; p < idx.size(); ++p) {
      Form piece = Form::from_scalar(c);
      for (std::size_t q = 0; q < idx.size(); ++q) {
        Form factor = q == p ? exterior_derivative(Form::from_scalar(X.components[idx[q]]))
                             : Form::differential(chart, idx[q]);
        piece = wedge(piece, factor);
      }
      out += piece;
    }
  }
  return out;
}

// Determinant of a small square matrix by cofactor expansion.
inline Rational det_oracle(const std::vector<Vec>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) return 1;
  if (n == 1) return rows[0][0];
  Rational total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (rows[0][c] == 0) continue;
    std::vector<Vec> minor;
    for (std::size_t r = 1; r < n; ++r) {
      Vec row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != c) row.push_back(rows[r][j]);
      }
      minor.push_back(row);
    }
    const Rational term = rows[0][c] * det_oracle(minor);
    total += (c % 2 == 0) ? term : Rational(-term);
  }
  return total;
}

// omega(v_1, ..., v_k) = sum_I omega_I det(v_j[i_l]).
inline Rational evaluate_oracle(const AlternatingTensor& omega, const std::vector<Vec>& vs) {
  Rational total = 0;
  for (const auto& [idx, val] : omega.values()) {
    std::vector<Vec> m;
    for (const auto& v : vs) {
      Vec row;
      for (int i : idx) row.push_back(v[i]);
      m.push_back(row);
    }
    total += val * det_oracle(m);
  }
  return total;
}

inline AlternatingTensor random_tensor(Rng& rng, int n, int k, int density_percent) {
  AlternatingTensor t(n, k);
  for (const auto& idx : increasing_tuples(n, k)) {
    if (uniform(rng, 0, 99) < density_percent) t.add(idx, make_rational(uniform(rng, -2, 2)));
  }
  return t;
}

inline Vec random_vec(Rng& rng, int n, int lo = -2, int hi = 2) {
  Vec v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

// Every vector with entries in {-1, 0, 1}.
inline std::vector<Vec> ternary_cube(int n) {
  std::vector<Vec> out;
  std::vector<int> digits(n, -1);
  while (true) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = digits[i];
    out.push_back(v);
    int i = 0;
    while (i < n && digits[i] == 1) digits[i++] = -1;
    if (i == n) break;
    ++digits[i];
  }
  return out;
}

}  // namespace coiso::testing
