#pragma once

// Exact dense linear algebra over Q.

#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace coiso {

using Vec = std::vector<Rational>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  void append_row(const Vec& row);
  Vec row(int i) const;
  Vec operator*(const Vec& v) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> a_;
};

struct Echelon {
  Matrix reduced;
  std::vector<int> pivots;  // pivot column per nonzero row
};

// Reduced row echelon form by Gauss-Jordan elimination.
Echelon rref(Matrix m);
int rank(const Matrix& m);

// Basis of {x : m x = 0}; one vector per free column, that column set to 1.
std::vector<Vec> nullspace(const Matrix& m, int cols);

// A solution of m x = b with free variables set to 0, or nullopt.
std::optional<Vec> solve_particular(const Matrix& m, const Vec& b);

Vec unit_vector(int n, int i);
bool is_zero(const Vec& v);
Rational dot(const Vec& a, const Vec& b);
std::string vec_to_string(const Vec& v);

}  // namespace coiso
