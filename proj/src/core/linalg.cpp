#include "linalg.hpp"

#include "errors.hpp"

namespace coiso {

void Matrix::append_row(const Vec& row) {
  if (rows_ == 0 && cols_ == 0) cols_ = static_cast<int>(row.size());
  if (static_cast<int>(row.size()) != cols_) {
    fail(ErrorCode::DimensionMismatch, "row length differs from matrix width");
  }
  a_.insert(a_.end(), row.begin(), row.end());
  ++rows_;
}

Vec Matrix::row(int i) const {
  return Vec(a_.begin() + static_cast<std::ptrdiff_t>(i) * cols_,
             a_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_);
}

Vec Matrix::operator*(const Vec& v) const {
  if (static_cast<int>(v.size()) != cols_) fail(ErrorCode::DimensionMismatch, "matrix-vector size");
  Vec out(rows_, Rational(0));
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
    }
  }
  return out;
}

Echelon rref(Matrix m) {
  Echelon out;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i) {
      if (m(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    }
    Rational inv = 1 / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (int j = c; j < m.cols(); ++j) {
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

int rank(const Matrix& m) { return static_cast<int>(rref(m).pivots.size()); }

std::vector<Vec> nullspace(const Matrix& m, int cols) {
  if (m.rows() == 0) {
    std::vector<Vec> basis;
    for (int i = 0; i < cols; ++i) basis.push_back(unit_vector(cols, i));
    return basis;
  }
  if (m.cols() != cols) fail(ErrorCode::DimensionMismatch, "nullspace width");
  Echelon e = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : e.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      v[e.pivots[r]] = -e.reduced(static_cast<int>(r), f);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve_particular(const Matrix& m, const Vec& b) {
  if (static_cast<int>(b.size()) != m.rows()) fail(ErrorCode::DimensionMismatch, "rhs length");
  Matrix aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Echelon e = rref(std::move(aug));
  Vec x(m.cols(), Rational(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    int c = e.pivots[r];
    if (c == m.cols()) return std::nullopt;  // 0 = 1
    x[c] = e.reduced(static_cast<int>(r), m.cols());
  }
  return x;
}

Vec unit_vector(int n, int i) {
  Vec v(n, Rational(0));
  v[i] = 1;
  return v;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v) {
    if (x != 0) return false;
  }
  return true;
}

Rational dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot product sizes");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  }
  return s;
}

std::string vec_to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v[i]);
  }
  return s + ")";
}

}  // namespace coiso
