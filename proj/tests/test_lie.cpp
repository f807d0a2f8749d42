#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "unilin/lie.hpp"

using namespace unilin;
using th::imat;
using th::ivec;
using th::catalog;
using th::oracle_class_h;
using th::solvable;

namespace {

Vec E(int n, int i, int j) { return sl_coords(elementary(n, i, j)); }
Vec Hd(int n, std::initializer_list<long> d) {
  Mat m = zeros(n, n);
  int i = 0;
  for (long x : d) m[i][i] = x, ++i;
  return sl_coords(m);
}

MatrixLieAlgebra alg(int n, std::vector<Vec> b) { return make_algebra(n, b); }

}  // namespace

TEST_CASE("coordinates and brackets in sl2") {
  Vec h = ivec({1, 0, 0}), e = ivec({0, 1, 0}), f = ivec({0, 0, 1});
  CHECK(sl_matrix(h, 2) == imat({{1, 0}, {0, -1}}));
  CHECK(sl_matrix(e, 2) == imat({{0, 1}, {0, 0}}));
  CHECK(bracket(h, e, 2) == ivec({0, 2, 0}));
  CHECK(bracket(e, f, 2) == ivec({1, 0, 0}));
  CHECK(is_zero(bracket(e, e, 2)));
  Mat g = imat({{1, 0}, {2, 1}});
  CHECK(mul(adjoint(g), e) == ivec({-2, 1, -4}));
  th::Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    Vec z = rng.rvec(8, 5, 3);
    CHECK(sl_coords(sl_matrix(z, 3)) == z);
  }
}

TEST_CASE("adjoint is a homomorphism") {
  th::Rng rng(22);
  for (int t = 0; t < 10; ++t) {
    Mat a = th::random_sl_z(rng, 3, 6), b = th::random_sl_z(rng, 3, 6);
    CHECK(adjoint(mul(a, b)) == mul(adjoint(a), adjoint(b)));
  }
}

TEST_CASE("killing matrix of sl2") {
  CHECK(killing_matrix(full_sl(2)) == imat({{8, 0, 0}, {0, 0, 4}, {0, 4, 0}}));
}

TEST_CASE("radicals") {
  auto s = radical_and_unipotent_radical(full_sl(2));
  CHECK(s.radical.dim() == 0);
  CHECK(s.unipotent_radical.dim() == 0);
  auto b = alg(2, {ivec({1, 0, 0}), ivec({0, 1, 0})});
  auto rb = radical_and_unipotent_radical(b);
  CHECK(same_algebra(rb.radical, b));
  CHECK(same_algebra(rb.unipotent_radical, alg(2, {ivec({0, 1, 0})})));
  auto u = alg(2, {ivec({0, 1, 0})});
  auto ru = radical_and_unipotent_radical(u);
  CHECK(same_algebra(ru.radical, u));
  CHECK(same_algebra(ru.unipotent_radical, u));
}

TEST_CASE("class-H closure") {
  CHECK(same_algebra(class_h_closure(full_sl(2)), full_sl(2)));
  auto b = alg(2, {ivec({1, 0, 0}), ivec({0, 1, 0})});
  CHECK(same_algebra(class_h_closure(b), alg(2, {ivec({0, 1, 0})})));
  CHECK(class_h_closure(alg(2, {ivec({1, 0, 0})})).dim() == 0);
  CHECK(is_class_h(full_sl(2)));
  CHECK_FALSE(is_class_h(b));
  CHECK(is_class_h(alg(2, {ivec({0, 1, 0})})));
}

TEST_CASE("class-H catalog agrees with the derived-series oracle") {
  auto cat = catalog();
  REQUIRE(cat.size() >= 10);
  for (const auto& e : cat) {
    CAPTURE(e.name);
    CHECK(is_class_h(e.l) == e.class_h);
    CHECK(oracle_class_h(e.l) == e.class_h);
    auto r = radical_and_unipotent_radical(e.l);
    CHECK(solvable(r.radical));
    if (r.radical.dim() > 0) CHECK(is_ideal(e.l, r.radical));
    CHECK(subspace_of(r.unipotent_radical.basis, r.radical.basis));
    for (const auto& z : r.unipotent_radical.basis) CHECK(is_nilpotent_element(sl_matrix(z, e.l.n)).nilpotent);
    auto c = class_h_closure(e.l);
    CHECK(is_class_h(c));
    CHECK(same_algebra(class_h_closure(c), c));
  }
}

TEST_CASE("unipotent radical elements are nilpotent") {
  th::Rng rng(23);
  for (const auto& e : catalog()) {
    auto ru = radical_and_unipotent_radical(e.l).unipotent_radical;
    for (int t = 0; t < 5 && ru.dim() > 0; ++t) {
      Vec z(ru.ambient_dim());
      for (const auto& b : ru.basis) z = add(z, scale(b, rng.rational(5, 3)));
      CHECK(is_nilpotent_element(sl_matrix(z, e.l.n)).nilpotent);
    }
  }
}

TEST_CASE("nilpotent elements") {
  auto a = is_nilpotent_element(imat({{0, 1}, {0, 0}}));
  CHECK(a.nilpotent);
  CHECK(a.sigma_bar == 0);
  auto b = is_nilpotent_element(imat({{1, 0}, {0, -1}}));
  CHECK_FALSE(b.nilpotent);
  CHECK(b.sigma_bar == -1);
  auto c = is_nilpotent_element(imat({{0, 2}, {2, 0}}));
  CHECK_FALSE(c.nilpotent);
  CHECK(c.sigma_bar == -4);
}

TEST_CASE("normalizers") {
  auto g2 = full_sl(2);
  auto n1 = normalizer(g2, alg(2, {ivec({0, 1, 0})}));
  CHECK(same_algebra(n1, alg(2, {ivec({1, 0, 0}), ivec({0, 1, 0})})));
  CHECK(same_algebra(normalizer(g2, g2), g2));

  auto g3 = full_sl(3);
  auto u = alg(3, {E(3, 0, 2)});
  auto n3 = normalizer(g3, u);
  // brute force over the coordinate basis: every basis element is an eigenvector of ad(E13)'s projection
  int members = 0;
  for (int j = 0; j < 8; ++j) {
    Vec b = sl_basis_vector(3, j);
    bool in = in_span(u.basis, bracket(b, E(3, 0, 2), 3));
    CHECK(contains(n3, b) == in);
    members += in;
  }
  CHECK(n3.dim() == members);
  CHECK(n3.dim() == 5);
}

TEST_CASE("parabolic from nilpotent") {
  auto g2 = full_sl(2);
  auto p = parabolic_from_nilpotent(g2, {ivec({0, 1, 0})});
  CHECK(same_algebra(p.parabolic, alg(2, {ivec({1, 0, 0}), ivec({0, 1, 0})})));
  CHECK(p.chain.size() == 1);

  auto g3 = full_sl(3);
  auto borel3 = alg(3, {Hd(3, {1, -1, 0}), Hd(3, {0, 1, -1}), E(3, 0, 1), E(3, 0, 2), E(3, 1, 2)});
  auto q = parabolic_from_nilpotent(g3, {E(3, 0, 1), E(3, 0, 2), E(3, 1, 2)});
  CHECK(same_algebra(q.parabolic, borel3));
  auto r = parabolic_from_nilpotent(g3, {E(3, 0, 2)});
  CHECK(same_algebra(r.parabolic, normalizer(g3, r.chain.back())));
  CHECK(same_algebra(r.parabolic, borel3));

  for (const auto& res : {p, q, r}) {
    CHECK(same_algebra(normalizer(res.parabolic.n == 2 ? g2 : g3, res.parabolic), res.parabolic));
    auto nil = radical_and_unipotent_radical(res.parabolic).unipotent_radical;
    CHECK(subspace_of(res.chain.front().basis, nil.basis));
  }
  CHECK_THROWS_AS(parabolic_from_nilpotent(g2, {ivec({1, 0, 0})}), Error);
  CHECK_THROWS_AS(parabolic_from_nilpotent(g2, {ivec({0, 1, 0}), ivec({0, 0, 1})}), Error);
}

TEST_CASE("lower central series") {
  auto ab = lower_central_series(alg(3, {E(3, 0, 1), E(3, 0, 2)}));
  CHECK(ab.chain.size() == 1);
  CHECK(ab.grades.size() == 1);
  auto hs = lower_central_series(alg(3, {E(3, 0, 1), E(3, 1, 2), E(3, 0, 2)}));
  REQUIRE(hs.chain.size() == 2);
  CHECK(same_algebra(hs.chain[1], alg(3, {E(3, 0, 2)})));
  REQUIRE(hs.grades.size() == 2);
  CHECK(same_span(hs.grades[0], {E(3, 0, 1), E(3, 1, 2)}));
  CHECK(same_span(hs.grades[1], {E(3, 0, 2)}));
  CHECK_THROWS_AS(lower_central_series(full_sl(2)), Error);
}

TEST_CASE("construction checks closure") {
  CHECK_THROWS_AS(make_algebra(2, {ivec({0, 1, 0}), ivec({0, 0, 1})}), Error);
  CHECK_THROWS_AS(make_algebra(2, {ivec({0, 1, 0}), ivec({0, 2, 0})}), Error);
  auto g = generated_algebra(2, {ivec({0, 1, 0}), ivec({0, 0, 1})});
  CHECK(g.dim() == 3);
}
