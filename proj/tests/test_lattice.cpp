#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "unilin/lattice.hpp"

using namespace unilin;
using th::imat;
using th::ivec;
using th::q;

namespace {

Mat diag2(const Q& a) { return Mat{{a, Q(0)}, {Q(0), 1 / a}}; }
Vec E(int n, int i, int j) { return sl_coords(elementary(n, i, j)); }

// Exhaustive minimum of the sup norm over coefficient vectors in a box.
Q brute_min(const LatticeBasis& l, long box) {
  int r = l.rank();
  ZVec x(r, Z(-box));
  Q best = -1;
  while (true) {
    bool zero = true;
    for (const auto& c : x) zero = zero && c == 0;
    if (!zero) {
      Q c = sup_norm(l.combine(x));
      if (best < 0 || c < best) best = c;
    }
    int i = 0;
    while (i < r && x[i] == box) x[i] = -box, ++i;
    if (i == r) break;
    ++x[i];
  }
  return best;
}

Mat random_sl_q(th::Rng& rng, int n) {
  Mat g;
  do {
    g = th::random_sl_z(rng, n, 4, 2);
    Mat d = identity(n);
    Q a = rng.rational(4, 4);
    if (a == 0) a = 1;
    d[0][0] = a;
    d[n - 1][n - 1] = 1 / a;
    g = mul(g, mul(d, th::random_sl_z(rng, n, 4, 2)));
  } while (det(g) != 1);
  return g;
}

MatPoly ad_exp(const Vec& z, int n, const Q& s) {
  return rescale(exp_nilpotent(ad_in(full_sl(n), z)), s);
}

}  // namespace

TEST_CASE("lll transform and reduction") {
  th::Rng rng(31);
  for (int t = 0; t < 40; ++t) {
    std::vector<Vec> b{rng.rvec(3, 50, 7), rng.rvec(3, 50, 7), rng.rvec(3, 50, 7)};
    if (rank(b) != 3) continue;
    auto r = lll(b);
    REQUIRE(r.basis.size() == 3);
    Mat tm;
    for (int i = 0; i < 3; ++i) {
      Vec v(3);
      Vec row;
      for (int j = 0; j < 3; ++j) v = add(v, scale(b[j], Q(r.transform[i][j]))), row.emplace_back(r.transform[i][j]);
      CHECK(v == r.basis[i]);
      tm.push_back(row);
    }
    CHECK(abs(det(tm)) == 1);
  }
  auto dep = lll({ivec({2, 0}), ivec({3, 0}), ivec({0, 5}), ivec({1, 5})});
  CHECK(dep.basis.size() == 2);
  CHECK(abs(det(Mat{dep.basis[0], dep.basis[1]})) == 5);
}

TEST_CASE("shortest_c examples") {
  CHECK(shortest_c(column_lattice(identity(3))).c == 1);
  auto sl2 = full_sl(2);
  auto s = shortest_c(adjoint_lattice(diag2(q(4)), sl2));
  CHECK(s.c == q(1, 16));
  CHECK(shortest_c(adjoint_lattice(identity(2), sl2)).c == 1);
}

TEST_CASE("shortest_c matches exhaustive search") {
  th::Rng rng(32);
  for (int t = 0; t < 40; ++t) {
    int n = 2 + t % 2;
    auto l = column_lattice(random_sl_q(rng, n));
    auto red = make_lattice(lll(l.vectors).basis);
    auto s = shortest_c(l);
    CHECK(s.c == brute_min(red, 4));
    CHECK(sup_norm(l.combine(s.coeffs)) == s.c);
    CHECK(s.c <= 1);
  }
}

TEST_CASE("x_eta examples") {
  auto sl2 = full_sl(2);
  for (Q eta : {q(1), q(1, 2), q(1, 1000)}) CHECK(x_eta_test(identity(2), eta, sl2).in);
  CHECK(x_eta_test(diag2(q(4)), q(1, 16), sl2).in);
  auto out = x_eta_test(diag2(q(4)), q(1, 15), sl2);
  CHECK_FALSE(out.in);
  REQUIRE(out.witness);
  CHECK(out.witness->c < q(1, 15));
  CHECK_FALSE(x_eta_test(identity(2), q(3, 2), sl2).in);
  th::Rng rng(33);
  for (int t = 0; t < 20; ++t) CHECK_FALSE(x_eta_test(random_sl_q(rng, 2), q(1001, 1000), sl2).in);
}

TEST_CASE("x_eta witness is below eta") {
  th::Rng rng(34);
  auto sl2 = full_sl(2);
  for (int t = 0; t < 40; ++t) {
    Mat g = random_sl_q(rng, 2);
    auto r = x_eta_test(g, q(1, 3), sl2);
    auto s = shortest_c(adjoint_lattice(g, sl2));
    CHECK(r.in == (s.c >= q(1, 3)));
    if (r.witness) CHECK(r.witness->c == s.c);
  }
}

TEST_CASE("reduce_representative examples") {
  auto a = reduce_representative(imat({{1, 100}, {0, 1}}));
  CHECK(a.gamma == imat({{1, -100}, {0, 1}}));
  CHECK(a.reduced == identity(2));
  CHECK(reduce_representative(identity(2)).gamma == identity(2));
  auto d = reduce_representative(diag2(q(4)));
  CHECK(d.gamma == identity(2));
  CHECK(d.size_after == 4);
  // exhaustive search over γ in SL2(Z) with entries bounded by 8
  Q best = -1;
  for (long p = -8; p <= 8; ++p)
    for (long r = -8; r <= 8; ++r)
      for (long s = -8; s <= 8; ++s)
        for (long u = -8; u <= 8; ++u) {
          if (p * u - r * s != 1) continue;
          Q sz = group_size(mul(diag2(q(4)), imat({{p, r}, {s, u}})));
          if (best < 0 || sz < best) best = sz;
        }
  CHECK(best == 4);
  ConstantsProfile k;
  CHECK(reduction_bound_holds(d, q(1, 16), k));
}

TEST_CASE("reduction lands in SL and never increases size") {
  th::Rng rng(35);
  for (int t = 0; t < 30; ++t) {
    Mat g = random_sl_q(rng, 3);
    auto r = reduce_representative(g);
    CHECK(det(r.gamma) == 1);
    for (const auto& row : r.gamma) CHECK(is_integral(row));
    CHECK(r.size_after <= r.size_before);
    CHECK(mul(g, r.gamma) == r.reduced);
  }
}

TEST_CASE("alpha_i examples") {
  auto id = column_lattice(identity(3));
  for (int i = 1; i <= 3; ++i) CHECK(alpha_i(id, i).alpha == 1);
  auto l = column_lattice(Mat{{q(1, 4), q(0)}, {q(0), q(4)}});
  auto a = alpha_i(l, 1);
  CHECK(a.alpha == 4);
  CHECK(a.witness.vectors[0] == Vec{q(1, 4), q(0)});
  th::Rng rng(36);
  for (int t = 0; t < 10; ++t) CHECK(alpha_i(column_lattice(random_sl_q(rng, 3)), 3).c_min == 1);
}

TEST_CASE("alpha_i matches exhaustive search in rank 3") {
  th::Rng rng(37);
  for (int t = 0; t < 15; ++t) {
    auto l = column_lattice(random_sl_q(rng, 3));
    auto red = make_lattice(lll(l.vectors).basis);
    CHECK(alpha_i(l, 1).c_min == shortest_c(l).c);
    // rank-2 oracle: the plane spanned by two small coefficient vectors, saturated
    Q best = -1;
    std::vector<ZVec> vs;
    for (long a = -2; a <= 2; ++a)
      for (long b = -2; b <= 2; ++b)
        for (long c = -2; c <= 2; ++c)
          if (a || b || c) vs.push_back({Z(a), Z(b), Z(c)});
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        std::vector<Vec> pair{{Q(vs[i][0]), Q(vs[i][1]), Q(vs[i][2])}, {Q(vs[j][0]), Q(vs[j][1]), Q(vs[j][2])}};
        if (rank(pair) != 2) continue;
        auto s = primitive_submodule(red, {vs[i], vs[j]});
        if (best < 0 || s.c < best) best = s.c;
      }
    auto a2 = alpha_i(l, 2);
    CHECK(a2.c_min == best);
    CHECK(annihilator_dim(a2.witness.w) == 2);
  }
}

TEST_CASE("flag examples") {
  auto id = column_lattice(identity(2));
  auto up = exp_nilpotent(imat({{0, 1}, {0, 0}}));
  auto f0 = flag_construct(id, up);
  CHECK(f0.ranks.empty());
  CHECK(flag_concave(f0));

  auto l = column_lattice(Mat{{q(1, 4), q(0)}, {q(0), q(4)}});
  auto f1 = flag_construct(l, up);
  REQUIRE(f1.ranks == std::vector<int>{1});
  CHECK(f1.eta[0] == q(1, 4));
  CHECK(f1.modules[0].vectors[0] == Vec{q(1, 4), q(0)});
  CHECK(flag_concave(f1));

  auto low = rescale(exp_nilpotent(imat({{0, 0}, {1, 0}})), q(20 * 20 * 20));
  auto f2 = flag_construct(l, low);
  CHECK(f2.ranks.empty());
}

TEST_CASE("grid certificate bounds the supremum") {
  th::Rng rng(38);
  for (int t = 0; t < 30; ++t) {
    int d = 1 + t % 5;
    std::vector<double> c(d + 1);
    for (auto& x : c) x = static_cast<double>(rng.uniform(-50, 50));
    auto p = [&](double x) {
      double r = 0;
      for (int k = d; k >= 0; --k) r = r * x + c[k];
      return std::fabs(r);
    };
    double gmax = 0, tmax = 0;
    for (const auto& x : chebyshev_grid(d)) gmax = std::max(gmax, p(to_double(x)));
    for (int j = 0; j <= 20000; ++j) tmax = std::max(tmax, p(-1.0 + j / 10000.0));
    CHECK(tmax <= gmax * grid_certificate(d) * (1 + 1e-12));
  }
}

TEST_CASE("flags are concave and dominate user submodules") {
  th::Rng rng(39);
  auto z = imat({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  for (int t = 0; t < 12; ++t) {
    Mat g = random_sl_q(rng, 3);
    auto l = column_lattice(g);
    auto act = rescale(exp_nilpotent(z), q(t % 3 + 1));
    auto f = flag_construct(l, act);
    CHECK(flag_concave(f));
    for (const auto& b : f.best) {
      long double env = f.log_eta(b.sub.rank);
      CHECK(env <= log_abs(b.eta) + 1e-12L);
    }
  }
}

TEST_CASE("obstruction detection") {
  auto sl2 = full_sl(2);
  ConstantsProfile k;
  auto l = adjoint_lattice(diag2(q(8)), sl2);
  auto f = flag_construct(l, ad_exp(E(2, 1, 0), 2, q(400)));
  REQUIRE_FALSE(f.ranks.empty());
  auto r = detect_unipotent_obstruction(f, l, sl2, k.rho, k.kappa_prime);
  REQUIRE(r.found);
  CHECK(same_algebra(r.W->lie, make_algebra(2, {E(2, 1, 0)})));
  CHECK(r.bound_ok);

  FlagProfile empty;
  empty.N = 3;
  CHECK_FALSE(detect_unipotent_obstruction(empty, l, sl2, k.rho, k.kappa_prime).found);

  auto id = adjoint_lattice(identity(2), sl2);
  FlagProfile syn;
  syn.N = 3;
  syn.ranks = {1};
  syn.modules = {submodule(id, {{Z(1), Z(0), Z(0)}})};
  syn.eta = {q(1, 100)};
  auto bad = detect_unipotent_obstruction(syn, id, sl2, k.rho, k.kappa_prime);
  CHECK_FALSE(bad.found);
  CHECK(bad.sigma_bar == -1);
  CHECK(bad.diagnostic.find("non-nilpotent") != std::string::npos);

  CHECK_FALSE(detect_unipotent_obstruction(f, l, sl2, q(1, 2), k.kappa_prime).found);
}

TEST_CASE("minkowski completion") {
  th::Rng rng(40);
  for (int t = 0; t < 10; ++t) {
    auto l = column_lattice(random_sl_q(rng, 3));
    FlagProfile empty;
    empty.N = 3;
    auto c = minkowski_complete(empty, l, identity(3), q(4));
    REQUIRE(c.modules.size() == 3);
    for (int i = 0; i + 1 < 3; ++i) CHECK(contained(c.modules[i], c.modules[i + 1]));
    CHECK(c.c[2] == 1);
    CHECK(c.modules[0].c <= 1);
  }
  auto l = column_lattice(Mat{{q(1, 4), q(0)}, {q(0), q(4)}});
  auto f = flag_construct(l, exp_nilpotent(imat({{0, 1}, {0, 0}})));
  auto c = minkowski_complete(f, l, identity(2), q(4));
  CHECK(c.c[0] == q(1, 4));
  CHECK(c.c[1] == 1);
  CHECK(c.within_A);
}

TEST_CASE("sum-intersection inequality") {
  th::Rng rng(41);
  double worst = 0;
  for (int t = 0; t < 60; ++t) {
    auto l = column_lattice(random_sl_q(rng, 3));
    auto a = primitive_submodule(l, {{Z(rng.uniform(-3, 3)), Z(rng.uniform(-3, 3)), Z(1)}});
    auto b = primitive_submodule(l, {{Z(1), Z(rng.uniform(-3, 3)), Z(rng.uniform(-3, 3))},
                                     {Z(rng.uniform(-3, 3)), Z(1), Z(rng.uniform(-3, 3))}});
    if (a.rank != 1 || b.rank != 2) continue;
    auto s = sum_intersection(l, a, b);
    worst = std::max(worst, s.ratio);
  }
  ConstantsProfile k;
  CHECK(worst <= to_double(k.minkowski_A));
  CHECK(worst > 0);
}

TEST_CASE("exceptional fraction decays") {
  auto z = imat({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  Mat g = identity(3);
  g[1][0] = q(3, 4);
  g = mul(Mat{{q(1, 8), q(0), q(0)}, {q(0), q(1), q(0)}, {q(0), q(0), q(8)}}, g);
  auto l = column_lattice(g);
  auto act = exp_nilpotent(z);
  auto f = flag_construct(l, act);
  std::vector<Q> samples;
  for (int j = 0; j < 64; ++j) samples.push_back(Q(-1) + Q(2 * j + 1, 64));
  auto fit = exceptional_fit(f, l, act, samples, {q(1, 1024), q(1, 64), q(1, 8), q(1, 4), q(1, 2), q(1)});
  CHECK_FALSE(fit.all_zero);
  CHECK(fit.fraction.back() == 1);
  CHECK(fit.fraction.front() == 0);
  // Zero fractions enter at the 1/64 floor: slope of log(1/64) to log 1 over the ε ladder.
  CHECK(std::isfinite(fit.exponent));
  CHECK(fit.exponent > 0);
  for (std::size_t i = 0; i + 1 < fit.fraction.size(); ++i) CHECK(fit.fraction[i] <= fit.fraction[i + 1]);
}

TEST_CASE("exceptional fit conventions") {
  auto z = imat({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  std::vector<Q> samples;
  for (int j = 0; j < 32; ++j) samples.push_back(Q(-1) + Q(2 * j + 1, 32));
  auto act = exp_nilpotent(z);
  // Z^3 and a diagonal cusp lattice keep their shortest vector fixed along the orbit, so nothing is
  // exceptional for ε ≤ 1.
  for (const Mat& g : {identity(3), Mat{{q(1, 8), q(0), q(0)}, {q(0), q(1), q(0)}, {q(0), q(0), q(8)}}}) {
    auto l = column_lattice(g);
    auto flat = exceptional_fit(flag_construct(l, act), l, act, samples, {q(1, 4), q(1, 2), q(1)});
    CHECK(flat.all_zero);
    CHECK(std::isinf(flat.exponent));
  }
  auto l = column_lattice(identity(3));
  CHECK_THROWS_AS(exceptional_fit(flag_construct(l, act), l, act, samples, {q(2)}), Error);
}
