#pragma once

// Linear algebra on a single tangent space: alternating tensors, subspaces,
// kernels, the structure-specific orthogonals and linear Darboux bases.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "indices.hpp"
#include "linalg.hpp"

namespace coiso {

// Determinant convention: (e^0 ^ e^1)(e_0, e_1) = 1.
class AlternatingTensor {
 public:
  AlternatingTensor(int dimension, int degree);

  int dimension() const { return n_; }
  int degree() const { return k_; }
  const std::map<IndexTuple, Rational>& values() const { return values_; }

  // Accepts any tuple; reorders with the permutation sign.
  Rational at(IndexTuple idx) const;
  void add(IndexTuple idx, const Rational& v);
  bool is_zero() const { return values_.empty(); }

  // i_v T, i.e. T(v, ...).
  AlternatingTensor contract(const Vec& v) const;
  // Full evaluation on exactly degree() vectors.
  Rational apply(const std::vector<Vec>& vectors) const;
  // Covector of a degree-1 tensor.
  Vec as_covector() const;

  static AlternatingTensor from_covector(const Vec& c);
  friend AlternatingTensor wedge(const AlternatingTensor& a, const AlternatingTensor& b);
  friend bool operator==(const AlternatingTensor& a, const AlternatingTensor& b) = default;

 private:
  int n_;
  int k_;
  std::map<IndexTuple, Rational> values_;
};

AlternatingTensor wedge(const AlternatingTensor& a, const AlternatingTensor& b);

class Subspace {
 public:
  // Throws DimensionMismatch if the vectors are dependent or the wrong size.
  Subspace(int ambient, std::vector<Vec> basis);

  // Independent basis extracted from an arbitrary spanning list.
  static Subspace span(int ambient, const std::vector<Vec>& vectors);
  static Subspace whole(int ambient);
  static Subspace zero(int ambient);
  static Subspace coordinate(int ambient, const std::vector<int>& indices);

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }

  bool contains(const Vec& v) const;
  bool contains(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  friend bool operator==(const Subspace& a, const Subspace& b);

  std::string to_string() const;

 private:
  int n_;
  std::vector<Vec> basis_;
};

Subspace form_kernel(const AlternatingTensor& omega);

// {X : c(X) = 0 for every constraint, and B(X, Y) = 0 for every Y in W}.
Subspace constrained_orthogonal(const Subspace& W, const AlternatingTensor& two_form,
                                const std::vector<Vec>& constraints);

// Joint version over several 2-forms (k-structures).
Subspace joint_orthogonal(const Subspace& W, const std::vector<AlternatingTensor>& two_forms,
                          const std::vector<Vec>& constraints);

// {X : (i_X omega)(w_1, ..., w_ell, ...) = 0 as a form, for all w_i in W}.
Subspace multisymplectic_l_orthogonal(const Subspace& W, const AlternatingTensor& omega, int ell);

enum class Family {
  Symplectic,
  Cosymplectic,
  Contact,
  Cocontact,
  KSymplectic,
  KCosymplectic,
  KContact,
  Multisymplectic,
};

const char* family_name(Family f);

// Pointwise data of one structure. For cocontact, constraints = {xi, eta}
// and pairings = {d eta}; for the k-families, index j of both lists belongs
// to the j-th member.
struct PointStructure {
  Family family;
  std::vector<Vec> constraints;
  std::vector<AlternatingTensor> pairings;
  std::optional<AlternatingTensor> top;
};

Subspace structure_orthogonal(const Subspace& W, const PointStructure& s, int ell);

struct CoisotropyResult {
  bool coisotropic;
  Subspace orthogonal;
  std::optional<Vec> witness;  // orthogonal vector not in W
};

CoisotropyResult is_coisotropic(const Subspace& W, const PointStructure& s, int ell);

struct DarbouxBasis {
  std::vector<Vec> q;
  std::vector<Vec> p;
  std::vector<Vec> z;
  int r() const { return static_cast<int>(q.size()); }
};

// Symplectic Gram-Schmidt; the pivot is the lexicographically smallest pair
// (i, j), i < j, among entries of maximal absolute value.
DarbouxBasis linear_darboux_basis(const AlternatingTensor& omega);

}  // namespace coiso
