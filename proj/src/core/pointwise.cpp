#include "pointwise.hpp"

#include "errors.hpp"

namespace coiso {

AlternatingTensor::AlternatingTensor(int dimension, int degree) : n_(dimension), k_(degree) {
  if (degree < 0) fail(ErrorCode::BadDegree, "negative tensor degree");
}

Rational AlternatingTensor::at(IndexTuple idx) const {
  if (static_cast<int>(idx.size()) != k_) fail(ErrorCode::BadDegree, "tensor index arity");
  int s = sort_with_sign(idx);
  if (s == 0) return 0;
  auto it = values_.find(idx);
  if (it == values_.end()) return 0;
  return s > 0 ? it->second : Rational(-it->second);
}

void AlternatingTensor::add(IndexTuple idx, const Rational& v) {
  if (v == 0) return;
  if (static_cast<int>(idx.size()) != k_) fail(ErrorCode::BadDegree, "tensor index arity");
  for (int i : idx) {
    if (i < 0 || i >= n_) fail(ErrorCode::IndexOutOfRange, "tensor index out of range");
  }
  int s = sort_with_sign(idx);
  if (s == 0) return;
  auto [it, inserted] = values_.try_emplace(idx, s > 0 ? v : Rational(-v));
  if (!inserted) {
    it->second += s > 0 ? v : Rational(-v);
    if (it->second == 0) values_.erase(it);
  }
}

AlternatingTensor AlternatingTensor::contract(const Vec& v) const {
  if (k_ == 0) fail(ErrorCode::DegreeZero, "contraction of a degree-0 tensor");
  if (static_cast<int>(v.size()) != n_) fail(ErrorCode::DimensionMismatch, "contraction vector size");
  AlternatingTensor out(n_, k_ - 1);
  for (const auto& [idx, val] : values_) {
    for (int p = 0; p < k_; ++p) {
      const Rational& vi = v[idx[p]];
      if (vi == 0) continue;
      IndexTuple rest;
      rest.reserve(k_ - 1);
      for (int j = 0; j < k_; ++j) {
        if (j != p) rest.push_back(idx[j]);
      }
      Rational term = vi * val;
      if (p % 2 == 1) term = -term;
      auto [it, inserted] = out.values_.try_emplace(rest, term);
      if (!inserted) {
        it->second += term;
        if (it->second == 0) out.values_.erase(it);
      }
    }
  }
  return out;
}

Rational AlternatingTensor::apply(const std::vector<Vec>& vectors) const {
  if (static_cast<int>(vectors.size()) != k_) fail(ErrorCode::BadDegree, "apply needs degree() vectors");
  AlternatingTensor t = *this;
  for (const auto& v : vectors) t = t.contract(v);
  return t.at({});
}

Vec AlternatingTensor::as_covector() const {
  if (k_ != 1) fail(ErrorCode::BadDegree, "covector view of a non-1-tensor");
  Vec c(n_, Rational(0));
  for (const auto& [idx, val] : values_) c[idx[0]] = val;
  return c;
}

AlternatingTensor AlternatingTensor::from_covector(const Vec& c) {
  AlternatingTensor t(static_cast<int>(c.size()), 1);
  for (int i = 0; i < static_cast<int>(c.size()); ++i) t.add({i}, c[i]);
  return t;
}

AlternatingTensor wedge(const AlternatingTensor& a, const AlternatingTensor& b) {
  if (a.n_ != b.n_) fail(ErrorCode::DimensionMismatch, "tensor wedge dimensions");
  AlternatingTensor out(a.n_, a.k_ + b.k_);
  if (out.k_ > out.n_) return out;
  for (const auto& [ia, va] : a.values_) {
    for (const auto& [ib, vb] : b.values_) {
      IndexTuple idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(idx, va * vb);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Subspace::Subspace(int ambient, std::vector<Vec> basis) : n_(ambient), basis_(std::move(basis)) {
  Matrix m(0, ambient);
  for (const auto& v : basis_) {
    if (static_cast<int>(v.size()) != ambient) fail(ErrorCode::DimensionMismatch, "subspace vector size");
    m.append_row(v);
  }
  if (rank(m) != static_cast<int>(basis_.size())) {
    fail(ErrorCode::DimensionMismatch, "subspace basis is linearly dependent");
  }
}

Subspace Subspace::span(int ambient, const std::vector<Vec>& vectors) {
  Matrix m(0, ambient);
  for (const auto& v : vectors) m.append_row(v);
  Echelon e = rref(m);
  std::vector<Vec> basis;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) basis.push_back(e.reduced.row(static_cast<int>(r)));
  return Subspace(ambient, std::move(basis));
}

Subspace Subspace::whole(int ambient) {
  std::vector<Vec> b;
  for (int i = 0; i < ambient; ++i) b.push_back(unit_vector(ambient, i));
  return Subspace(ambient, std::move(b));
}

Subspace Subspace::zero(int ambient) { return Subspace(ambient, {}); }

Subspace Subspace::coordinate(int ambient, const std::vector<int>& indices) {
  std::vector<Vec> b;
  for (int i : indices) b.push_back(unit_vector(ambient, i));
  return Subspace(ambient, std::move(b));
}

bool Subspace::contains(const Vec& v) const {
  if (static_cast<int>(v.size()) != n_) fail(ErrorCode::DimensionMismatch, "membership vector size");
  if (is_zero(v)) return true;
  Matrix m(0, n_);
  for (const auto& b : basis_) m.append_row(b);
  m.append_row(v);
  return rank(m) == dim();
}

bool Subspace::contains(const Subspace& other) const {
  if (other.n_ != n_) fail(ErrorCode::DimensionMismatch, "subspace ambient dimensions");
  for (const auto& v : other.basis_) {
    if (!contains(v)) return false;
  }
  return true;
}

namespace {

// Covectors vanishing on the subspace.
std::vector<Vec> annihilator(const Subspace& s) {
  Matrix m(0, s.ambient());
  for (const auto& b : s.basis()) m.append_row(b);
  return nullspace(m, s.ambient());
}

}  // namespace

Subspace Subspace::intersect(const Subspace& other) const {
  if (other.n_ != n_) fail(ErrorCode::DimensionMismatch, "subspace ambient dimensions");
  Matrix m(0, n_);
  for (const auto& c : annihilator(*this)) m.append_row(c);
  for (const auto& c : annihilator(other)) m.append_row(c);
  return Subspace(n_, nullspace(m, n_));
}

bool operator==(const Subspace& a, const Subspace& b) {
  return a.n_ == b.n_ && a.dim() == b.dim() && a.contains(b);
}

std::string Subspace::to_string() const {
  std::string s = "span{";
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (i) s += ", ";
    s += vec_to_string(basis_[i]);
  }
  return s + "}";
}

// ---------------------------------------------------------------------------

Subspace form_kernel(const AlternatingTensor& omega) {
  const int n = omega.dimension();
  const int k = omega.degree();
  if (k < 1) fail(ErrorCode::BadDegree, "kernel of a degree-0 tensor");
  Matrix m(0, n);
  for (const auto& rest : increasing_tuples(n, k - 1)) {
    Vec row(n, Rational(0));
    bool any = false;
    for (int j = 0; j < n; ++j) {
      IndexTuple idx{j};
      idx.insert(idx.end(), rest.begin(), rest.end());
      row[j] = omega.at(idx);
      any = any || row[j] != 0;
    }
    if (any) m.append_row(row);
  }
  return Subspace(n, nullspace(m, n));
}

namespace {

void append_pairing_rows(Matrix& m, const Subspace& W, const AlternatingTensor& two_form) {
  const int n = W.ambient();
  if (two_form.degree() != 2) fail(ErrorCode::BadDegree, "orthogonal needs a 2-form");
  if (two_form.dimension() != n) fail(ErrorCode::DimensionMismatch, "2-form dimension");
  for (const auto& w : W.basis()) {
    // row[j] = B(e_j, w)
    Vec row = two_form.contract(w).as_covector();
    for (auto& x : row) x = -x;
    m.append_row(row);
  }
}

}  // namespace

Subspace joint_orthogonal(const Subspace& W, const std::vector<AlternatingTensor>& two_forms,
                          const std::vector<Vec>& constraints) {
  const int n = W.ambient();
  Matrix m(0, n);
  for (const auto& c : constraints) {
    if (static_cast<int>(c.size()) != n) fail(ErrorCode::DimensionMismatch, "constraint size");
    m.append_row(c);
  }
  for (const auto& b : two_forms) append_pairing_rows(m, W, b);
  return Subspace(n, nullspace(m, n));
}

Subspace constrained_orthogonal(const Subspace& W, const AlternatingTensor& two_form,
                                const std::vector<Vec>& constraints) {
  return joint_orthogonal(W, {two_form}, constraints);
}

Subspace multisymplectic_l_orthogonal(const Subspace& W, const AlternatingTensor& omega, int ell) {
  const int n = W.ambient();
  const int deg = omega.degree();
  if (omega.dimension() != n) fail(ErrorCode::DimensionMismatch, "form dimension");
  if (ell < 1 || ell > deg - 1) {
    fail(ErrorCode::BadDegree, "ell = " + std::to_string(ell) + " outside [1, " +
                                   std::to_string(deg - 1) + "]");
  }
  const int completion = deg - 1 - ell;
  Matrix m(0, n);
  for (const auto& subset : increasing_tuples(W.dim(), ell)) {
    AlternatingTensor c = omega;
    for (int s : subset) c = c.contract(W.basis()[s]);
    if (c.is_zero()) continue;
    for (const auto& rest : increasing_tuples(n, completion)) {
      Vec row(n, Rational(0));
      bool any = false;
      for (int j = 0; j < n; ++j) {
        IndexTuple idx{j};
        idx.insert(idx.end(), rest.begin(), rest.end());
        row[j] = c.at(idx);
        any = any || row[j] != 0;
      }
      if (any) m.append_row(row);
    }
  }
  return Subspace(n, nullspace(m, n));
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Symplectic: return "symplectic";
    case Family::Cosymplectic: return "cosymplectic";
    case Family::Contact: return "contact";
    case Family::Cocontact: return "cocontact";
    case Family::KSymplectic: return "ksymplectic";
    case Family::KCosymplectic: return "kcosymplectic";
    case Family::KContact: return "kcontact";
    case Family::Multisymplectic: return "multisymplectic";
  }
  return "?";
}

Subspace structure_orthogonal(const Subspace& W, const PointStructure& s, int ell) {
  auto first = [](const auto& v, int count) {
    if (count < 1 || count > static_cast<int>(v.size())) {
      fail(ErrorCode::BadDegree, "ell = " + std::to_string(count) + " outside [1, " +
                                     std::to_string(v.size()) + "]");
    }
    return std::vector(v.begin(), v.begin() + count);
  };
  switch (s.family) {
    case Family::Symplectic:
      return joint_orthogonal(W, s.pairings, {});
    case Family::Cosymplectic:
    case Family::Contact:
    case Family::Cocontact:
      return joint_orthogonal(W, s.pairings, s.constraints);
    case Family::KSymplectic:
      return joint_orthogonal(W, first(s.pairings, ell), {});
    case Family::KCosymplectic:
    case Family::KContact:
      return joint_orthogonal(W, first(s.pairings, ell), first(s.constraints, ell));
    case Family::Multisymplectic:
      if (!s.top) fail(ErrorCode::InvalidInput, "multisymplectic structure without its form");
      return multisymplectic_l_orthogonal(W, *s.top, ell);
  }
  fail(ErrorCode::InvalidInput, "unknown structure family");
}

CoisotropyResult is_coisotropic(const Subspace& W, const PointStructure& s, int ell) {
  Subspace orth = structure_orthogonal(W, s, ell);
  for (const auto& v : orth.basis()) {
    if (!W.contains(v)) return {false, orth, v};
  }
  return {true, orth, std::nullopt};
}

DarbouxBasis linear_darboux_basis(const AlternatingTensor& omega) {
  if (omega.degree() != 2) fail(ErrorCode::BadDegree, "Darboux basis needs a 2-tensor");
  const int n = omega.dimension();
  std::vector<Vec> rest;
  for (int i = 0; i < n; ++i) rest.push_back(unit_vector(n, i));
  DarbouxBasis out;
  auto pair = [&](const Vec& a, const Vec& b) { return omega.apply({a, b}); };
  while (rest.size() >= 2) {
    int bi = -1;
    int bj = -1;
    Rational best = 0;
    Rational best_val = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      for (std::size_t j = i + 1; j < rest.size(); ++j) {
        Rational v = pair(rest[i], rest[j]);
        if (abs(v) > best) {
          best = abs(v);
          best_val = v;
          bi = static_cast<int>(i);
          bj = static_cast<int>(j);
        }
      }
    }
    if (bi < 0) break;
    Vec q = rest[bi];
    Vec p = rest[bj];
    for (auto& x : p) x /= best_val;
    std::vector<Vec> next;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (static_cast<int>(i) == bi || static_cast<int>(i) == bj) continue;
      Vec v = rest[i];
      Rational vp = pair(v, p);
      Rational vq = pair(v, q);
      for (int c = 0; c < n; ++c) v[c] += -vp * q[c] + vq * p[c];
      next.push_back(std::move(v));
    }
    out.q.push_back(std::move(q));
    out.p.push_back(std::move(p));
    rest = std::move(next);
  }
  out.z = std::move(rest);
  return out;
}

}  // namespace coiso
