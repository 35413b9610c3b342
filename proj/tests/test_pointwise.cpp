#include <doctest.h>

#include "errors.hpp"
#include "pointwise.hpp"
#include "support/random_forms.hpp"

using namespace coiso;
using testing::Rng;

namespace {

AlternatingTensor two_form(int n, std::initializer_list<std::pair<IndexTuple, int>> entries) {
  AlternatingTensor t(n, 2);
  for (const auto& [idx, v] : entries) t.add(idx, v);
  return t;
}

}  // namespace

TEST_SUITE("pointwise") {

TEST_CASE("alternating tensors") {
  AlternatingTensor w = two_form(3, {{{0, 1}, 1}});
  CHECK(w.at({1, 0}) == -1);
  AlternatingTensor iw = w.contract(unit_vector(3, 0));
  CHECK(iw.as_covector() == Vec{0, 1, 0});
  CHECK(w.apply({unit_vector(3, 0), unit_vector(3, 1)}) == 1);
  AlternatingTensor dx = AlternatingTensor::from_covector(unit_vector(3, 0));
  AlternatingTensor dy = AlternatingTensor::from_covector(unit_vector(3, 1));
  CHECK(wedge(dx, dy) == w);
  CHECK(wedge(dy, dx).at({0, 1}) == -1);
}

TEST_CASE("subspaces") {
  Subspace a = Subspace::coordinate(4, {0, 1});
  Subspace b = Subspace::span(4, {Vec{0, 1, 0, 0}, Vec{0, 0, 1, 0}, Vec{0, 1, 1, 0}});
  CHECK(b.dim() == 2);
  CHECK(a.intersect(b) == Subspace::coordinate(4, {1}));
  CHECK(a.contains(Vec{3, -1, 0, 0}));
  CHECK_FALSE(a.contains(Vec{0, 0, 1, 0}));
  CHECK(Subspace::whole(4).contains(b));
  CHECK_THROWS_AS(Subspace(2, {Vec{1, 0}, Vec{2, 0}}), Error);
}

TEST_CASE("kernel of the standard presymplectic form") {
  AlternatingTensor w = two_form(3, {{{0, 1}, 1}});
  CHECK(form_kernel(w) == Subspace::coordinate(3, {2}));
  AlternatingTensor vol(4, 3);
  vol.add({0, 1, 2}, 1);
  CHECK(form_kernel(vol) == Subspace::coordinate(4, {3}));
}

TEST_CASE("symplectic orthogonal of a Lagrangian is itself") {
  AlternatingTensor w = two_form(4, {{{0, 2}, 1}, {{1, 3}, 1}});
  Subspace L = Subspace::coordinate(4, {0, 1});
  CHECK(constrained_orthogonal(L, w, {}) == L);
  CoisotropyResult r = is_coisotropic(Subspace::coordinate(4, {0}), {Family::Symplectic, {}, {w}, std::nullopt}, 1);
  CHECK_FALSE(r.coisotropic);
  REQUIRE(r.witness);
  CHECK_FALSE(Subspace::coordinate(4, {0}).contains(*r.witness));
}

TEST_CASE("multisymplectic orthogonals") {
  AlternatingTensor vol(4, 3);
  vol.add({0, 1, 2}, 1);
  CHECK(multisymplectic_l_orthogonal(Subspace::coordinate(4, {3}), vol, 1) == Subspace::whole(4));
  CHECK(multisymplectic_l_orthogonal(Subspace::coordinate(4, {0}), vol, 1) == Subspace::coordinate(4, {0, 3}));
  CHECK(multisymplectic_l_orthogonal(Subspace::coordinate(4, {0, 1}), vol, 2) == Subspace::coordinate(4, {0, 1, 3}));
  CHECK_THROWS_AS(multisymplectic_l_orthogonal(Subspace::coordinate(4, {0}), vol, 3), Error);
}

TEST_CASE("linear Darboux basis normalizes the form") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = testing::uniform(rng, 2, 6);
    AlternatingTensor w = testing::random_tensor(rng, n, 2, 60);
    DarbouxBasis b = linear_darboux_basis(w);
    REQUIRE(b.q.size() == b.p.size());
    CHECK(2 * b.r() + static_cast<int>(b.z.size()) == n);
    for (int i = 0; i < b.r(); ++i) {
      for (int j = 0; j < b.r(); ++j) {
        CHECK(w.apply({b.q[i], b.p[j]}) == (i == j ? 1 : 0));
        CHECK(w.apply({b.q[i], b.q[j]}) == 0);
        CHECK(w.apply({b.p[i], b.p[j]}) == 0);
      }
    }
    for (const auto& z : b.z) CHECK(form_kernel(w).contains(z));
    std::vector<Vec> all = b.q;
    all.insert(all.end(), b.p.begin(), b.p.end());
    all.insert(all.end(), b.z.begin(), b.z.end());
    CHECK(Subspace::span(n, all).dim() == n);
  }
}

TEST_CASE("constrained orthogonal satisfies its defining equations") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = testing::uniform(rng, 2, 6);
    AlternatingTensor w = testing::random_tensor(rng, n, 2, 50);
    std::vector<Vec> W;
    for (int i = testing::uniform(rng, 0, n - 1); i > 0; --i) W.push_back(testing::random_vec(rng, n));
    std::vector<Vec> cons;
    for (int i = testing::uniform(rng, 0, 2); i > 0; --i) cons.push_back(testing::random_vec(rng, n));
    Subspace Ws = Subspace::span(n, W);
    Subspace o = constrained_orthogonal(Ws, w, cons);
    for (const auto& x : o.basis()) {
      for (const auto& c : cons) CHECK(dot(c, x) == 0);
      for (const auto& y : Ws.basis()) CHECK(testing::evaluate_oracle(w, {x, y}) == 0);
    }
  }
}

}
