#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "unilin/certify.hpp"

using namespace unilin;
using th::q;

namespace {

// Direct evaluation of the two parsed test polynomials.
Q eval_naive(const std::string& which, const Q& x, const Q& y) {
  if (which == "a") return (x + y) * (x + y) * (x - 2 * y);
  return (x * x - 3) * (y + 1) - x * y;
}

Poly random_poly(th::Rng& rng, int nvars, int deg, int terms) {
  Poly p = Poly::constant(nvars, 0);
  for (int t = 0; t < terms; ++t) {
    Monomial m(nvars, 0);
    int left = static_cast<int>(rng.uniform(0, deg));
    for (int i = 0; i < nvars && left > 0; ++i) {
      int e = static_cast<int>(rng.uniform(0, left));
      m[i] = e;
      left -= e;
    }
    Poly mono = Poly::constant(nvars, Q(rng.uniform(-9, 9)));
    for (int i = 0; i < nvars; ++i) mono = mono * pow(Poly::variable(nvars, i), m[i]);
    p = p + mono;
  }
  return p;
}

}  // namespace

TEST_CASE("polynomial parsing") {
  std::vector<std::string> v{"x", "y"};
  Poly a = parse_poly("(x + y)^2 (x - 2y)", v);
  Poly b = parse_poly("(x^2 - 3)*(y + 1) - x*y", v);
  th::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    Q x = rng.rational(7, 3), y = rng.rational(7, 3);
    CHECK(a.eval({x, y}) == eval_naive("a", x, y));
    CHECK(b.eval({x, y}) == eval_naive("b", x, y));
  }
  CHECK(a.total_degree() == 3);
  CHECK(to_string(parse_poly("x^2 - 2", {"x"}), {"x"}) == "x^2 - 2");
  CHECK(to_string(parse_poly("-x*y + 3/2", v), v) == "-x*y + 3/2");
  CHECK(parse_poly("x - x", v).is_zero());
  CHECK(collect_vars({"x1^2 + y", "x1 - z"}) == std::vector<std::string>{"x1", "y", "z"});
  CHECK_THROWS_AS(parse_poly("x + w", v), Error);
  CHECK_THROWS_AS(parse_poly("x +", v), Error);
  CHECK_THROWS_AS(parse_poly("(x", v), Error);
  auto sys = make_system({"x^2 - 2"});
  CHECK(sys.D0 == 2);
  CHECK(sys.vars == std::vector<std::string>{"x"});
  CHECK_THROWS_AS(make_system({"x/2"}), Error);
  CHECK_THROWS_AS(make_system({"x^3"}, {}, 2), Error);
}

TEST_CASE("property: arithmetic agrees with evaluation") {
  th::Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    Poly a = random_poly(rng, 3, 4, 5), b = random_poly(rng, 3, 4, 5);
    std::vector<Q> x{rng.rational(5, 3), rng.rational(5, 3), rng.rational(5, 3)};
    CHECK((a * b).eval(x) == a.eval(x) * b.eval(x));
    CHECK((a - b).eval(x) == a.eval(x) - b.eval(x));
    Q ax = a.eval(x);
    CHECK(pow(a, 3).eval(x) == ax * ax * ax);
    CHECK((a + b).derivative(1) == a.derivative(1) + b.derivative(1));
  }
}

TEST_CASE("nss bounds") {
  auto b = nss_bounds(2, 1, 2, 0);
  CHECK(b.M == 2);
  CHECK(b.b_bound == 65536);
  CHECK(b.degree_bound == 1048576);
  auto c = nss_bounds(1, 3, 1, 0);
  CHECK(c.M == 1);
  CHECK(c.b_bound == 64);
  CHECK(c.convention == "implicit constants set to 1");
  // (8 D0)^(4M-1) (h + 8 D0 log 8 D0) for m = 1, D0 = 1, h = 0: 8^3 * 8 log 8
  CHECK(c.log10_height_bound == doctest::Approx(std::log10(512.0 * 8 * std::log(8.0))));
  CHECK_THROWS_AS(nss_bounds(0, 1, 1, 0), Error);
}

TEST_CASE("property: nss bounds are monotone") {
  for (int m = 1; m <= 4; ++m)
    for (int D0 = 1; D0 <= 5; ++D0)
      for (double h : {0.0, 1.0, 3.5}) {
        auto b = nss_bounds(m, 2, D0, h);
        auto bm = nss_bounds(m + 1, 2, D0, h), bd = nss_bounds(m, 2, D0 + 1, h), bh = nss_bounds(m, 2, D0, h + 1);
        CHECK(bm.b_bound >= b.b_bound);
        CHECK(bd.b_bound >= b.b_bound);
        CHECK(bd.degree_bound >= b.degree_bound);
        CHECK(bm.log10_height_bound >= b.log10_height_bound);
        CHECK(bd.log10_height_bound >= b.log10_height_bound);
        CHECK(bh.log10_height_bound >= b.log10_height_bound);
        CHECK(bh.b_bound == b.b_bound);
      }
}

TEST_CASE("certificate verification examples") {
  auto sys = make_system({"x^2 + y", "x*y - 1"});
  NssCertificate c{sys.f[0], 1, 1, {Poly::constant(2, 1), Poly::constant(2, 0)}};
  auto r = verify_certificate(c, sys);
  CHECK(r.valid);
  CHECK(r.b_ok);
  CHECK(r.degree_ok);
  CHECK(r.height_ok);

  auto xy = make_system({"x", "y"});
  NssCertificate s{parse_poly("x + y", xy.vars), 1, 1, {Poly::constant(2, 1), Poly::constant(2, 1)}};
  CHECK(verify_certificate(s, xy).valid);
  s.q[1] = Poly::constant(2, 2);
  auto bad = verify_certificate(s, xy);
  CHECK_FALSE(bad.valid);
  CHECK(bad.reason.find("identity") != std::string::npos);
  s.q.pop_back();
  CHECK_FALSE(verify_certificate(s, xy).valid);
}

TEST_CASE("Euclidean certificates") {
  auto sys = make_system({"x^2", "x + 1"});
  auto one = Poly::constant(1, 1);
  auto c = euclid_certificate(sys, one);
  CHECK(c.b == 1);
  CHECK(c.a == 1);
  // 1 = x^2 - (x - 1)(x + 1)
  CHECK(c.q[0] == one);
  CHECK(c.q[1] == parse_poly("1 - x", sys.vars));
  CHECK(verify_certificate(c, sys).valid);

  auto sq = make_system({"x^2 - 2x + 1", "x^3 - 1"});
  auto r = euclid_certificate(sq, parse_poly("x - 1", sq.vars));
  CHECK(r.b == 1);
  CHECK(verify_certificate(r, sq).valid);
  auto dbl = make_system({"x^4 - 2x^2 + 1"});
  auto d = euclid_certificate(dbl, parse_poly("x^2 - 1", dbl.vars));
  CHECK(d.b == 2);
  CHECK(verify_certificate(d, dbl).valid);
  CHECK_THROWS_AS(euclid_certificate(dbl, parse_poly("x", dbl.vars)), Error);
  auto scaled = make_system({"2x + 1", "3x"});
  auto e = euclid_certificate(scaled, Poly::constant(1, 1));
  CHECK(verify_certificate(e, scaled).valid);
  CHECK(e.a >= 1);
}

TEST_CASE("property: verification agrees with expansion") {
  th::Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    auto f1 = random_poly(rng, 2, 3, 4), f2 = random_poly(rng, 2, 3, 4);
    auto q1 = random_poly(rng, 2, 2, 3), q2 = random_poly(rng, 2, 2, 3);
    PolySystem sys;
    sys.vars = {"x", "y"};
    sys.f = {f1, f2};
    sys.D0 = 3;
    Poly target = q1 * f1 + q2 * f2;
    NssCertificate good{target, 1, 1, {q1, q2}};
    CHECK(verify_certificate(good, sys).valid);
    NssCertificate off = good;
    off.q[0] = off.q[0] + Poly::constant(2, 1);
    // q1 + 1 changes the right side by f1, so validity holds exactly when f1 = 0.
    CHECK(verify_certificate(off, sys).valid == f1.is_zero());
  }
}

TEST_CASE("Brownawell bound") {
  CHECK(brownawell_bound(1, 1, 1, 0, q(1), q(1), q(3), 2) == doctest::Approx(3.0));
  double v = static_cast<double>(brownawell_bound(2, 2, 2, 1, q(2), q(1, 4), q(1), 2));
  CHECK(v == doctest::Approx(std::exp(-2.0) / 256));
  long double prev = brownawell_bound(1, 1, 1, 0.5, q(2), q(1, 2), q(1), 2);
  for (double h : {1.0, 2.0, 4.0}) {
    long double cur = brownawell_bound(1, 1, 1, h, q(2), q(1, 2), q(1), 2);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(brownawell_bound(1, 1, 1, 0, q(1), q(2), q(1), 1), Error);
}

TEST_CASE("Hensel lifting examples") {
  auto sys = make_system({"x^2 - 2"});
  auto r = hensel_lift(sys, {Z(3)}, 7, 1, 3);
  REQUIRE(r.steps.size() == 3);
  CHECK(r.steps[0].y[0] == 3);
  CHECK(r.steps[1].y[0] == 10);
  CHECK(r.steps[2].y[0] == 108);
  CHECK(r.y[0] == 108);
  CHECK((Z(108) * 108 - 2) % 343 == 0);
  CHECK(r.congruence_ok);
  CHECK(r.proximity_ok);
  CHECK(r.minor_valuation == 0);
  CHECK(r.digits[0] == std::vector<int>{3, 1, 2});  // 108 = 3 + 1*7 + 2*49

  auto lin = make_system({"x"});
  auto z = hensel_lift(lin, {Z(0)}, 5, 1, 10);
  CHECK(z.y[0] == 0);
  CHECK(z.exact_root);
  CHECK(z.steps.size() == 1);

  auto dbl = make_system({"x^2"});
  CHECK_THROWS_AS(hensel_lift(dbl, {Z(5)}, 5, 2, 6), Error);
  try {
    hensel_lift(dbl, {Z(5)}, 5, 2, 6);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingularPoint);
  }
  CHECK_THROWS_AS(hensel_lift(sys, {Z(2)}, 7, 1, 3), Error);  // 2^2 - 2 is not 0 mod 7
  try {
    hensel_lift(sys, {Z(3)}, 7, 1, 1 << 20);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::PrecisionExhausted);
  }
}

TEST_CASE("Hensel lifting in two variables") {
  // Circle and line: x^2 + y^2 - 2 = 0, x - y = 0 at w = (1, 1) mod 7^2 after a shift by 7.
  auto sys = make_system({"x^2 + y^2 - 2", "x - y"});
  auto r = hensel_lift(sys, {Z(8), Z(8)}, 7, 1, 12);
  CHECK(r.congruence_ok);
  CHECK(r.proximity_ok);
  CHECK(r.rows.size() == 2);
  Z p12;
  mpz_ui_pow_ui(p12.get_mpz_t(), 7, 12);
  CHECK(r.y[0] == r.y[1]);
  CHECK((r.y[0] * r.y[0] - 1) % p12 == 0);
  // Underdetermined: one equation, two variables; the lift moves one coordinate.
  auto u = make_system({"x^2 + y^2 - 5"});
  auto ur = hensel_lift(u, {Z(1), Z(2 + 11)}, 11, 1, 8);
  CHECK(ur.congruence_ok);
  CHECK(ur.cols.size() == 1);
}

TEST_CASE("property: lifts satisfy both congruences and the quadratic bound") {
  th::Rng rng(59);
  const long primes[] = {3, 5, 7, 11, 13};
  int lifted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    long p = primes[rng.uniform(0, 4)];
    long a = rng.uniform(1, p - 1);
    // x^2 - c with c a square mod p; start at w = a + p t.
    long t = rng.uniform(0, 5);
    Z w = a + p * t;
    long c = rng.uniform(-50, 50) * p + (a * a) % p;
    std::string poly = "x^2 - " + std::to_string(c);
    if (c < 0) poly = "x^2 + " + std::to_string(-c);
    auto sys = make_system({poly});
    long target = rng.uniform(2, 30);
    auto r = hensel_lift(sys, {w}, p, 1, target);
    CHECK(r.congruence_ok);
    CHECK(r.proximity_ok);
    for (size_t k = 1; k < r.steps.size(); ++k) {
      CHECK(r.steps[k].valuation >= std::min<long>(target, 2 * r.steps[k - 1].valuation - 2 * r.minor_valuation));
    }
    ++lifted;
  }
  CHECK(lifted == 200);
}
