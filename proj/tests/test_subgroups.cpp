#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "unilin/subgroups.hpp"

using namespace unilin;
using th::imat;
using th::ivec;
using th::q;
using th::oracle_count;

namespace {

Vec E(int n, int i, int j) { return sl_coords(elementary(n, i, j)); }

SubgroupDescriptor upper2() { return describe(make_algebra(2, {E(2, 0, 1)}), full_sl(2), "U+"); }
UnipotentDirection dir_e() { return make_direction(2, {E(2, 0, 1)}); }

const Mat kWeyl = imat({{0, -1}, {1, 0}});
const Mat kT = imat({{1, 1}, {0, 1}});

// Normalizer elements acting with trace zero on H: an independent description of Lie(L_H).
std::vector<Vec> oracle_stabilizer(const MatrixLieAlgebra& g, const SubgroupDescriptor& h) {
  int n = g.n;
  std::vector<Vec> out;
  // Solve for coefficients x with [sum x_j g_j, H] ⊆ H and tr(ad|_H) = 0: linear in x.
  SpanCoords sc(h.lie.basis);
  auto compl_ = annihilator(h.lie.basis, sl_dim(n));
  Mat rows;
  std::size_t m = g.basis.size();
  for (const auto& b : h.lie.basis)
    for (const auto& a : compl_) {
      Vec r(m);
      for (std::size_t j = 0; j < m; ++j) r[j] = dot(a, bracket(g.basis[j], b, n));
      rows.push_back(r);
    }
  auto ns = nullspace(rows.empty() ? Mat{Vec(m)} : rows, static_cast<int>(m));
  // Among normalizer elements impose the trace condition.
  Mat tr;
  Vec trow(ns.size());
  for (std::size_t k = 0; k < ns.size(); ++k) {
    Vec z(sl_dim(n));
    for (std::size_t j = 0; j < m; ++j) z = add(z, scale(g.basis[j], ns[k][j]));
    Q t = 0;
    for (std::size_t i = 0; i < h.lie.basis.size(); ++i) t += sc.coords(bracket(z, h.lie.basis[i], n))[i];
    trow[k] = t;
  }
  auto ks = nullspace(Mat{trow}, static_cast<int>(ns.size()));
  for (const auto& c : ks) {
    Vec z(sl_dim(n));
    for (std::size_t k = 0; k < ns.size(); ++k)
      for (std::size_t j = 0; j < m; ++j) z = add(z, scale(g.basis[j], c[k] * ns[k][j]));
    out.push_back(z);
  }
  return out;
}

}  // namespace

TEST_CASE("eta_H examples") {
  auto h = upper2();
  CHECK(h.height == 1);
  CHECK(h.class_h);
  CHECK_FALSE(h.normal_in_G);
  CHECK(eta_H(identity(2), h) == h.v);

  Q a = q(3, 7);
  auto w = eta_H(Mat{{a, 0}, {0, 1 / a}}, h);
  CHECK(w.comp.size() == 1);
  CHECK(w.comp.at({1}) == a * a);

  auto x = eta_H(imat({{1, 0}, {2, 1}}), h);
  CHECK(ext_coords(x) == ivec({-2, 1, -4}));
  CHECK(c_fun(x, PlaceSystem::archimedean()) == 4);
  CHECK(conjugate(h, imat({{1, 0}, {2, 1}})).height == 4);

  auto y = eta_H(kWeyl, h);
  CHECK(ext_coords(y) == ivec({0, 0, -1}));
}

TEST_CASE("descriptor invariants") {
  auto g = full_sl(3);
  auto h = describe(make_algebra(3, {ivec({0, 0, 2, 0, 2, 0, 0, 0}), E(3, 0, 2)}), g);
  CHECK(wedge(h.lie.basis, 8) == h.v);
  CHECK(primitive_integer(h.v) == h.v);
  CHECK(Q(h.height) == sup_norm(h.v));
  auto whole = describe(g, g);
  CHECK(whole.normal_in_G);
  CHECK_THROWS_AS(describe(make_algebra(3, {E(3, 0, 1)}), make_algebra(3, {E(3, 1, 2)})), Error);
}

TEST_CASE("stabilizer of the upper unipotent in sl2") {
  auto s = stabilizer_L_H(upper2(), full_sl(2));
  CHECK(same_algebra(s.lie_L, make_algebra(2, {E(2, 0, 1)})));
  CHECK(same_algebra(s.M.lie, make_algebra(2, {E(2, 0, 1)})));
}

TEST_CASE("stabilizer of the whole algebra") {
  for (int n : {2, 3}) {
    auto g = full_sl(n);
    auto s = stabilizer_L_H(describe(g, g), g);
    CHECK(same_algebra(s.lie_L, g));
  }
}

TEST_CASE("stabilizer matches brute-force kernel") {
  auto g = full_sl(3);
  std::vector<MatrixLieAlgebra> hs{make_algebra(3, {E(3, 0, 1), E(3, 0, 2)}),
                                   make_algebra(3, {E(3, 0, 2)}),
                                   make_algebra(3, {E(3, 0, 1), E(3, 0, 2), E(3, 1, 2)}),
                                   make_algebra(3, {E(3, 1, 0)})};
  for (const auto& ha : hs) {
    auto h = describe(ha, g);
    auto s = stabilizer_L_H(h, g);
    auto o = oracle_stabilizer(g, h);
    CHECK(same_algebra(s.lie_L, MatrixLieAlgebra{3, span_basis(o)}));
    CHECK(s.M.class_h);
  }
}

TEST_CASE("diophantine examples") {
  ConstantsProfile k;
  auto h = upper2();
  auto u = dir_e();
  auto eps = parametric_epsilon(k, q(1, 100));
  auto v = diophantine_test(identity(2), eps, 5.0L, {h}, u);
  CHECK_FALSE(v.diophantine);
  CHECK(v.violator == 0);
  CHECK(v.rows[0].wedge == 0);

  auto w = diophantine_test(kWeyl, eps, 5.0L, {h}, u);
  CHECK(w.diophantine);
  CHECK(w.rows[0].wedge == 1);
  CHECK(w.rows[0].considered);

  auto e = diophantine_test(kWeyl, eps, 5.0L, {}, u);
  CHECK(e.diophantine);
  CHECK(e.vacuous);

  // c = 1 is not below e^0: nothing is considered
  auto z = diophantine_test(identity(2), eps, 0.0L, {h}, u);
  CHECK(z.diophantine);
  CHECK_FALSE(z.rows[0].considered);
}

TEST_CASE("epsilon profiles") {
  ConstantsProfile k;
  auto eps = parametric_epsilon(k, q(1, 2));
  CHECK(eps(q(1)) == q(1, 160));
  CHECK(eps(q(1, 100)) == k.eps_max);
  CHECK(eps.monotone());
  EpsilonProfile t;
  t.kind = EpsilonProfile::Kind::Table;
  t.table = {{q(1), q(1, 2)}, {q(10), q(1, 10)}};
  CHECK(t(q(1, 2)) == q(1, 2));
  CHECK(t(q(5)) == q(1, 2));
  CHECK(t(q(10)) == q(1, 10));
  CHECK(t.monotone());
  t.table.push_back({q(20), q(1, 5)});
  CHECK_FALSE(t.monotone());
  auto s = sigma_epsilon(k, q(1, 2), {}, dir_e());
  CHECK(s(q(1)) == q(1, 40) * q(1, 40) * q(1, 40) * q(1, 40));
  CHECK_THROWS_AS(eps(q(0)), Error);
}

TEST_CASE("tube membership examples") {
  auto h = upper2();
  auto u = dir_e();
  CHECK(tube_membership(identity(2), h, q(1), u));
  CHECK_FALSE(tube_membership(kWeyl, h, q(10), u));
  CHECK_FALSE(tube_membership(Mat{{q(2), q(0)}, {q(0), q(1, 2)}}, h, q(2), u));
  CHECK(tube_membership(Mat{{q(2), q(0)}, {q(0), q(1, 2)}}, h, q(4), u));
}

TEST_CASE("tube membership is a closed condition") {
  auto h = upper2();
  auto u = dir_e();
  for (long m = 1; m <= 50; ++m) {
    Q a = 2 - q(1, m);
    CHECK(tube_membership(Mat{{a, q(1, m)}, {q(0), 1 / a}}, h, q(4), u));
  }
  CHECK(tube_membership(Mat{{q(2), q(0)}, {q(0), q(1, 2)}}, h, q(4), u));
  for (long m = 1; m <= 50; ++m) CHECK(tube_membership(Mat{{q(1), q(1, m)}, {q(0), q(1)}}, h, q(1), u));
  CHECK(tube_membership(identity(2), h, q(1), u));
}

TEST_CASE("orbit catalog examples") {
  auto h = upper2();
  std::vector<Mat> gens{kT, kWeyl};
  auto c1 = gamma_orbit_catalog(h, gens, q(1), 4, q(4));
  CHECK(static_cast<long>(c1.entries.size()) == oracle_count(1));
  bool has_h = false, has_low = false;
  for (const auto& e : c1.entries) {
    has_h = has_h || e.v == h.v;
    has_low = has_low || ext_coords(e.v) == ivec({0, 0, 1});
  }
  CHECK(has_h);
  CHECK(has_low);

  auto c4 = gamma_orbit_catalog(h, gens, q(4), 4, q(4));
  bool found = false;
  for (const auto& e : c4.entries) found = found || ext_coords(e.v) == ivec({2, -1, 4});
  CHECK(found);
  CHECK(static_cast<long>(c4.entries.size()) == oracle_count(4));
  for (std::size_t i = 0; i < c4.entries.size(); ++i) {
    CHECK(c4.entries[i].height <= 4);
    CHECK(wedge(c4.entries[i].lie.basis, 3) == c4.entries[i].v);
    CHECK(canonical_sign(eta_H(c4.words[i], h)) == c4.entries[i].v);
  }

  auto c0 = gamma_orbit_catalog(h, gens, q(1), 0, q(4));
  REQUIRE(c0.entries.size() == 1);
  CHECK(c0.entries[0].v == h.v);
  CHECK(c0.word_bound_binding);
}

TEST_CASE("orbit catalog is thread independent") {
  auto h = upper2();
  auto a = gamma_orbit_catalog(h, {kT, kWeyl}, q(200), 60, q(4), 1);
  auto b = gamma_orbit_catalog(h, {kT, kWeyl}, q(200), 60, q(4), 3);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i].v == b.entries[i].v);
}

TEST_CASE("orbit count grows linearly in the height bound") {
  auto h = upper2();
  std::vector<double> xs, ys;
  for (long T : {10L, 31L, 100L, 316L, 1000L}) {
    auto c = gamma_orbit_catalog(h, {kT, kWeyl}, q(T), 400, q(4));
    CHECK_FALSE(c.word_bound_binding);
    CHECK(static_cast<long>(c.entries.size()) == oracle_count(T));
    xs.push_back(std::log(static_cast<double>(T)));
    ys.push_back(std::log(static_cast<double>(c.entries.size())));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= xs.size();
  my /= ys.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) num += (xs[i] - mx) * (ys[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
  double slope = num / den;
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("conjugation height identity") {
  th::Rng rng(21);
  auto g3 = full_sl(3);
  std::vector<SubgroupDescriptor> hs{upper2(), describe(make_algebra(3, {E(3, 0, 1), E(3, 0, 2)}), g3),
                                     describe(make_algebra(3, {E(3, 0, 2)}), g3)};
  for (int t = 0; t < 60; ++t) {
    const auto& h = hs[t % hs.size()];
    Mat gamma = th::random_sl_z(rng, h.lie.n, 6, 2);
    auto conj = describe(make_algebra(h.lie.n, [&] {
                           std::vector<Vec> b;
                           Mat gi = inverse(gamma);
                           for (const auto& z : h.lie.basis)
                             b.push_back(sl_coords(mul(mul(gamma, sl_matrix(z, h.lie.n)), gi)));
                           return b;
                         }()),
                         h.lie.n == 2 ? full_sl(2) : g3);
    CHECK(Q(conj.height) == c_fun(eta_H(gamma, h), PlaceSystem::archimedean()));
    CHECK(conj.v == conjugate(h, gamma).v);
  }
}

TEST_CASE("eta_H is a cocycle") {
  th::Rng rng(22);
  auto g3 = full_sl(3);
  auto h = describe(make_algebra(3, {E(3, 0, 1), E(3, 0, 2)}), g3);
  for (int t = 0; t < 30; ++t) {
    Mat a(3, Vec(3)), b(3, Vec(3));
    do {
      for (auto& r : a) r = rng.rvec(3, 5, 3);
    } while (det(a) == 0);
    do {
      for (auto& r : b) r = rng.rvec(3, 5, 3);
    } while (det(b) == 0);
    CHECK(eta_H(mul(a, b), h) == ext_apply(adjoint(a), eta_H(b, h)));
  }
}

TEST_CASE("diophantine verdict is unit invariant") {
  th::Rng rng(23);
  ConstantsProfile k;
  auto h = upper2();
  auto cat = gamma_orbit_catalog(h, {kT, kWeyl}, q(50), 30, q(4)).entries;
  auto eps = parametric_epsilon(k, q(1, 3));
  auto u = dir_e();
  auto um = make_direction(2, {scale(E(2, 0, 1), Q(-1))});
  for (int t = 0; t < 30; ++t) {
    Mat g = th::random_sl_z(rng, 2, 5, 3);
    g[0][0] += rng.rational(1, 7);
    g[1][1] = (1 + g[0][1] * g[1][0]) / g[0][0];
    if (g[0][0] == 0) continue;
    auto a = diophantine_test(g, eps, 4.0L, cat, u);
    auto b = diophantine_test(g, eps, 4.0L, cat, um);
    CHECK(a.diophantine == b.diophantine);
    CHECK(a.violator == b.violator);
  }
}

TEST_CASE("sigma_T examples") {
  auto u = make_direction(2, {scale(E(2, 0, 1), q(1, 6))});
  CHECK(sigma_T({}, q(5), u) == 1);
  SubgroupDescriptor n;
  n.dim = 1;
  n.v = ExteriorVector{1, 3, {}};
  n.v.add({0}, 1);
  n.v.add({2}, 2);
  n.height = 2;
  CHECK(max_wedge(u, n.v) == q(1, 3));
  CHECK(sigma_T({n}, q(5), u) == q(1, 3));
  CHECK(sigma_T({n}, q(1), u) == 1);
}

TEST_CASE("lojasiewicz intersection") {
  auto g3 = full_sl(3);
  auto u = make_direction(3, {E(3, 0, 2)});
  auto heis = describe(make_algebra(3, {E(3, 0, 1), E(3, 0, 2), E(3, 1, 2)}), g3, "heis");
  auto h2 = describe(make_algebra(3, {E(3, 0, 2), E(3, 1, 2)}), g3, "h2");
  auto r = loj_intersection(identity(3), heis, h2, g3, u, q(1), q(0));
  CHECK(same_algebra(r.h12.lie, h2.lie));
  CHECK(r.h12.class_h);
  CHECK(r.wedge == 0);
  CHECK(r.precondition_met);

  auto same = loj_intersection(identity(3), heis, heis, g3, u, q(1), q(0));
  CHECK(same.h12.v == heis.v);

  auto up = upper2();
  auto low = describe(make_algebra(2, {E(2, 1, 0)}), full_sl(2));
  try {
    loj_intersection(identity(2), up, low, full_sl(2), dir_e(), q(1), q(1));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TrivialIntersection);
  }
}
