#include "unilin/certify.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace unilin {

namespace {

void put(Poly& p, const Monomial& m, const Q& c) {
  if (c == 0) return;
  auto [it, fresh] = p.terms.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) p.terms.erase(it);
  }
}

void same_ring(const Poly& a, const Poly& b) { require(a.nvars == b.nvars, "polynomials live in different rings"); }

}  // namespace

Poly Poly::constant(int nvars, const Q& c) {
  Poly p;
  p.nvars = nvars;
  put(p, Monomial(nvars, 0), c);
  return p;
}

Poly Poly::variable(int nvars, int i) {
  require(i >= 0 && i < nvars, "variable index out of range");
  Poly p;
  p.nvars = nvars;
  Monomial m(nvars, 0);
  m[i] = 1;
  p.terms[m] = 1;
  return p;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms) {
    int s = 0;
    for (int e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

int Poly::degree_in(int i) const {
  int d = 0;
  for (const auto& [m, c] : terms) d = std::max(d, m[i]);
  return d;
}

bool Poly::integral() const {
  for (const auto& [m, c] : terms)
    if (c.get_den() != 1) return false;
  return true;
}

Q Poly::eval(const std::vector<Q>& x) const {
  require(static_cast<int>(x.size()) == nvars, "point has the wrong number of coordinates");
  Q s = 0;
  for (const auto& [m, c] : terms) {
    Q t = c;
    for (int i = 0; i < nvars; ++i)
      for (int e = 0; e < m[i]; ++e) t *= x[i];
    s += t;
  }
  return s;
}

Z Poly::eval(const std::vector<Z>& x) const {
  require(integral(), "integer evaluation needs integral coefficients");
  require(static_cast<int>(x.size()) == nvars, "point has the wrong number of coordinates");
  Z s = 0;
  for (const auto& [m, c] : terms) {
    Z t = c.get_num();
    for (int i = 0; i < nvars; ++i) {
      Z pw;
      mpz_pow_ui(pw.get_mpz_t(), x[i].get_mpz_t(), static_cast<unsigned long>(m[i]));
      t *= pw;
    }
    s += t;
  }
  return s;
}

Poly Poly::derivative(int i) const {
  Poly d;
  d.nvars = nvars;
  for (const auto& [m, c] : terms) {
    if (m[i] == 0) continue;
    Monomial n = m;
    --n[i];
    put(d, n, c * m[i]);
  }
  return d;
}

Poly operator+(const Poly& a, const Poly& b) {
  same_ring(a, b);
  Poly r = a;
  for (const auto& [m, c] : b.terms) put(r, m, c);
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  same_ring(a, b);
  Poly r = a;
  for (const auto& [m, c] : b.terms) put(r, m, Q(-c));
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  same_ring(a, b);
  Poly r;
  r.nvars = a.nvars;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Monomial m(a.nvars);
      for (int i = 0; i < a.nvars; ++i) m[i] = ma[i] + mb[i];
      put(r, m, ca * cb);
    }
  return r;
}

Poly operator*(const Q& s, const Poly& a) {
  Poly r;
  r.nvars = a.nvars;
  if (s == 0) return r;
  for (const auto& [m, c] : a.terms) r.terms[m] = s * c;
  return r;
}

Poly pow(const Poly& a, int k) {
  require(k >= 0, "negative exponent");
  Poly r = Poly::constant(a.nvars, 1), base = a;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  Poly parse() {
    Poly p = expr();
    skip();
    require(i_ == s_.size(), "unexpected '" + s_.substr(i_, 1) + "' in polynomial '" + s_ + "'");
    return p;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool starts_factor() {
    skip();
    if (i_ >= s_.size()) return false;
    char c = s_[i_];
    return std::isdigit(static_cast<unsigned char>(c)) || ident_start(c) || c == '(';
  }
  Z integer() {
    skip();
    size_t j = i_;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    require(j > i_, "expected a number in polynomial '" + s_ + "'");
    Z z(s_.substr(i_, j - i_), 10);
    i_ = j;
    return z;
  }
  Poly expr() {
    Poly p = Poly::constant(static_cast<int>(vars_.size()), 0);
    bool first = true;
    while (true) {
      skip();
      int sign = 1;
      if (peek('+') || peek('-')) {
        sign = s_[i_] == '-' ? -1 : 1;
        ++i_;
      } else if (!first) {
        break;
      }
      first = false;
      Poly t = term();
      p = sign > 0 ? p + t : p - t;
    }
    return p;
  }
  Poly term() {
    Poly p = factor();
    while (true) {
      if (peek('*')) {
        ++i_;
        p = p * factor();
      } else if (peek('/')) {
        ++i_;
        Z d = integer();
        require(d != 0, "division by zero in polynomial");
        p = Q(1, d) * p;
      } else if (starts_factor()) {
        p = p * factor();
      } else {
        break;
      }
    }
    return p;
  }
  Poly factor() {
    Poly base = primary();
    if (peek('^')) {
      ++i_;
      Z e = integer();
      require(e <= 10000, "exponent too large");
      base = pow(base, static_cast<int>(e.get_si()));
    }
    return base;
  }
  Poly primary() {
    skip();
    int n = static_cast<int>(vars_.size());
    require(i_ < s_.size(), "unexpected end of polynomial '" + s_ + "'");
    if (s_[i_] == '(') {
      ++i_;
      Poly p = expr();
      require(peek(')'), "missing ')' in polynomial '" + s_ + "'");
      ++i_;
      return p;
    }
    if (s_[i_] == '-') {
      ++i_;
      return Q(-1) * factor();
    }
    if (std::isdigit(static_cast<unsigned char>(s_[i_]))) return Poly::constant(n, Q(integer()));
    require(ident_start(s_[i_]), "unexpected '" + s_.substr(i_, 1) + "' in polynomial '" + s_ + "'");
    size_t j = i_;
    while (j < s_.size() && ident_char(s_[j])) ++j;
    std::string name = s_.substr(i_, j - i_);
    i_ = j;
    auto it = std::find(vars_.begin(), vars_.end(), name);
    require(it != vars_.end(), "unknown variable '" + name + "'");
    return Poly::variable(n, static_cast<int>(it - vars_.begin()));
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  size_t i_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& s, const std::vector<std::string>& vars) { return Parser(s, vars).parse(); }

std::vector<std::string> collect_vars(const std::vector<std::string>& polys) {
  std::vector<std::string> out;
  for (const auto& s : polys)
    for (size_t i = 0; i < s.size();) {
      if (ident_start(s[i])) {
        size_t j = i;
        while (j < s.size() && ident_char(s[j])) ++j;
        std::string name = s.substr(i, j - i);
        if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
        i = j;
      } else {
        ++i;
      }
    }
  return out;
}

std::string to_string(const Poly& p, const std::vector<std::string>& vars) {
  require(static_cast<int>(vars.size()) == p.nvars, "variable names do not match the ring");
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool any = false;
  // Highest total degree first, then lexicographically larger exponents first.
  std::vector<std::pair<Monomial, Q>> ts(p.terms.begin(), p.terms.end());
  std::stable_sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) {
    int dx = 0, dy = 0;
    for (int e : x.first) dx += e;
    for (int e : y.first) dy += e;
    if (dx != dy) return dx > dy;
    return x.first > y.first;
  });
  for (const auto& [m, c] : ts) {
    Q a = abs(c);
    os << (c < 0 ? (any ? " - " : "-") : (any ? " + " : ""));
    bool constant = std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
    bool star = false;
    if (constant || a != 1) {
      os << to_string(a);
      star = true;
    }
    for (int i = 0; i < p.nvars; ++i) {
      if (m[i] == 0) continue;
      if (star) os << '*';
      os << vars[i];
      if (m[i] > 1) os << '^' << m[i];
      star = true;
    }
    any = true;
  }
  return os.str();
}

double log_height(const Poly& p) {
  long double best = 0;
  bool any = false;
  for (const auto& [m, c] : p.terms) {
    long double l = log_abs(c);
    if (!any || l > best) best = l;
    any = true;
  }
  return any ? static_cast<double>(std::max<long double>(best, 0)) : 0.0;
}

PolySystem make_system(const std::vector<std::string>& polys, std::vector<std::string> vars, int D0) {
  require(!polys.empty(), "empty polynomial system");
  if (vars.empty()) vars = collect_vars(polys);
  PolySystem sys;
  sys.vars = vars;
  int deg = 0;
  for (const auto& s : polys) {
    Poly p = parse_poly(s, vars);
    require(p.integral(), "system polynomials must have integer coefficients");
    deg = std::max(deg, p.total_degree());
    sys.h = std::max(sys.h, log_height(p));
    sys.f.push_back(std::move(p));
  }
  require(D0 == 0 || D0 >= deg, "declared degree bound is below the maximal total degree");
  sys.D0 = D0 == 0 ? std::max(deg, 1) : D0;
  return sys;
}

NssBounds nss_bounds(int m, int n, int D0, double h) {
  require(m >= 1 && n >= 1 && D0 >= 1 && h >= 0, "nss bounds need positive m, n, D0 and h >= 0");
  require(m <= 24, "variable count too large for the bound calculator");
  NssBounds b;
  b.m = m;
  b.n = n;
  b.D0 = D0;
  b.h = h;
  b.M = 1 << (m - 1);
  Z base = 8 * D0;
  mpz_pow_ui(b.b_bound.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(2 * b.M));
  b.degree_bound = b.b_bound * base;
  double l8 = std::log10(8.0 * D0);
  b.log10_height_bound = (4.0 * b.M - 1) * l8 + std::log10(h + 8.0 * D0 * std::log(8.0 * D0));
  return b;
}

std::string NssBounds::height_bound() const {
  double e = std::floor(log10_height_bound);
  double mant = std::pow(10.0, log10_height_bound - e);
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << mant << "e+" << static_cast<long>(e);
  return os.str();
}

CertificateReport verify_certificate(const NssCertificate& cert, const PolySystem& sys) {
  CertificateReport r;
  r.bounds = nss_bounds(sys.m(), sys.n(), sys.D0, sys.h);
  if (cert.q.size() != sys.f.size()) {
    r.reason = "cofactor count does not match the system";
    return r;
  }
  if (cert.a == 0 || cert.b < 1) {
    r.reason = "need a != 0 and b >= 1";
    return r;
  }
  for (const auto& q : cert.q)
    if (q.nvars != sys.m()) {
      r.reason = "cofactor lives in a different ring";
      return r;
    }
  if (cert.f.nvars != sys.m()) {
    r.reason = "f lives in a different ring";
    return r;
  }
  Poly lhs = Q(cert.a) * pow(cert.f, cert.b);
  Poly rhs = Poly::constant(sys.m(), 0);
  for (size_t i = 0; i < cert.q.size(); ++i) rhs = rhs + cert.q[i] * sys.f[i];
  r.valid = lhs == rhs;
  if (!r.valid) r.reason = "identity a f^b = sum q_i f_i fails";
  for (const auto& q : cert.q) {
    r.max_cofactor_degree = std::max(r.max_cofactor_degree, q.total_degree());
    r.max_cofactor_height = std::max(r.max_cofactor_height, log_height(q));
  }
  r.b_ok = Z(cert.b) <= r.bounds.b_bound;
  r.degree_ok = Z(r.max_cofactor_degree) <= r.bounds.degree_bound;
  double ha = static_cast<double>(log_abs(cert.a));
  double hmax = std::max(ha, r.max_cofactor_height);
  r.height_ok = hmax <= 0 || std::log10(hmax) <= r.bounds.log10_height_bound;
  return r;
}

namespace {

using UP = std::vector<Q>;  // little-endian, no trailing zeros

void trim(UP& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

UP to_up(const Poly& p) {
  require(p.nvars == 1, "univariate polynomial expected");
  UP u(p.degree_in(0) + 1, Q(0));
  for (const auto& [m, c] : p.terms) u[m[0]] = c;
  trim(u);
  return u;
}

Poly from_up(const UP& u) {
  Poly p = Poly::constant(1, 0);
  for (size_t k = 0; k < u.size(); ++k) put(p, Monomial{static_cast<int>(k)}, u[k]);
  return p;
}

UP up_mul(const UP& a, const UP& b) {
  if (a.empty() || b.empty()) return {};
  UP r(a.size() + b.size() - 1, Q(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

UP up_sub(UP a, const UP& b) {
  if (a.size() < b.size()) a.resize(b.size(), Q(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

std::pair<UP, UP> up_divmod(UP a, const UP& b) {
  require(!b.empty(), "division by the zero polynomial");
  if (a.size() < b.size()) return {{}, a};
  UP q(a.size() - b.size() + 1, Q(0));
  while (!a.empty() && a.size() >= b.size()) {
    size_t s = a.size() - b.size();
    Q c = a.back() / b.back();
    q[s] = c;
    for (size_t j = 0; j < b.size(); ++j) a[s + j] -= c * b[j];
    trim(a);
  }
  trim(q);
  return {q, a};
}

// g = u a + v b with g monic (or zero).
void up_xgcd(const UP& a, const UP& b, UP& g, UP& u, UP& v) {
  UP r0 = a, r1 = b, s0{Q(1)}, s1{}, t0{}, t1{Q(1)};
  while (!r1.empty()) {
    auto [q, r] = up_divmod(r0, r1);
    r0 = r1;
    r1 = r;
    UP s2 = up_sub(s0, up_mul(q, s1)), t2 = up_sub(t0, up_mul(q, t1));
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  g = r0;
  u = s0;
  v = t0;
  if (!g.empty()) {
    Q lc = g.back();
    for (auto& x : g) x /= lc;
    for (auto& x : u) x /= lc;
    for (auto& x : v) x /= lc;
  }
}

}  // namespace

NssCertificate euclid_certificate(const PolySystem& sys, const Poly& f) {
  require(sys.m() == 1, "the Euclidean certificate needs a univariate system");
  size_t n = sys.f.size();
  UP g;
  std::vector<UP> s(n);
  for (size_t i = 0; i < n; ++i) {
    UP fi = to_up(sys.f[i]);
    if (i == 0) {
      g = fi;
      s[0] = {Q(1)};
      if (!g.empty()) {
        Q lc = g.back();
        for (auto& x : g) x /= lc;
        s[0] = {Q(1) / lc};
      }
      continue;
    }
    UP g2, u, v;
    up_xgcd(g, fi, g2, u, v);
    for (size_t j = 0; j < i; ++j) s[j] = up_mul(u, s[j]);
    s[i] = v;
    g = g2;
  }
  require(!g.empty(), "the ideal is zero");
  UP fu = to_up(f);
  int gdeg = static_cast<int>(g.size()) - 1;
  UP fb{Q(1)};
  for (int b = 1; b <= std::max(gdeg, 1); ++b) {
    fb = up_mul(fb, fu);
    auto [t, rem] = up_divmod(fb, g);
    if (!rem.empty()) continue;
    NssCertificate c;
    c.f = f;
    c.b = b;
    Z den = 1;
    std::vector<UP> qs(n);
    for (size_t i = 0; i < n; ++i) {
      qs[i] = up_mul(s[i], t);
      for (const auto& x : qs[i]) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    }
    c.a = den;
    for (size_t i = 0; i < n; ++i) c.q.push_back(Q(den) * from_up(qs[i]));
    return c;
  }
  fail(Errc::InvalidArgument, "f is not in the radical of the ideal");
}

long double brownawell_bound(int n, int m, int D0, double h, const Q& w_norm, const Q& b, const Q& C1, int k) {
  require(n >= 1 && m >= 1 && D0 >= 1 && h >= 0, "brownawell bound needs positive sizes and h >= 0");
  require(w_norm > 0 && b > 0 && b <= 1 && C1 > 0 && k >= 1, "brownawell bound needs |w| > 0, 0 < b <= 1, C1 > 0, k >= 1");
  long double lg = log_abs(C1) - static_cast<long double>(k) * h - k * (2 * log_abs(w_norm) - log_abs(b));
  return std::exp(lg);
}

long padic_valuation(const Z& x, long p, long cap) {
  if (x == 0) return cap;
  Z y = x, pp = p;
  long v = 0;
  while (v < cap && mpz_divisible_p(y.get_mpz_t(), pp.get_mpz_t())) {
    y /= pp;
    ++v;
  }
  return v;
}

namespace {

Z zpow(long p, long e) {
  Z r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

Z mod(const Z& x, const Z& m) {
  Z r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

HenselResult hensel_lift(const PolySystem& sys, const std::vector<Z>& w, long p, long C2, long target,
                         long max_precision) {
  require(is_prime(p), "p must be prime");
  require(static_cast<int>(w.size()) == sys.m(), "point has the wrong number of coordinates");
  require(C2 >= 1, "congruence level must be at least 1");
  require(target >= C2, "target precision must be at least the congruence level");
  if (target > max_precision) fail(Errc::PrecisionExhausted, "target precision exceeds the working precision cap");
  for (const auto& f : sys.f) require(f.integral(), "system polynomials must be integral");

  HenselResult res;
  res.p = p;
  res.target = target;
  res.C2 = C2;
  for (int j = 0; j < sys.n(); ++j)
    require(padic_valuation(sys.f[j].eval(w), p, C2) >= C2,
            "f_" + std::to_string(j + 1) + "(w) is not 0 mod p^C2");

  // Square subsystem: largest size r with a minor of valuation v, 2v < C2; minimal v among those.
  int m = sys.m(), n = sys.n();
  std::vector<std::vector<Poly>> jac(n, std::vector<Poly>(m));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) jac[j][i] = sys.f[j].derivative(i);
  auto jac_at = [&](const std::vector<Z>& y, const std::vector<int>& rows, const std::vector<int>& cols) {
    Mat a(rows.size(), Vec(cols.size()));
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < cols.size(); ++c) a[r][c] = Q(jac[rows[r]][cols[c]].eval(y));
    return a;
  };
  long best_v = -1;
  long seen_v = -1;
  for (int r = std::min(n, m); r >= 1 && best_v < 0; --r)
    for (const auto& rows : multi_indices(n, r))
      for (const auto& cols : multi_indices(m, r)) {
        Q d = det(jac_at(w, rows, cols));
        if (d == 0) continue;
        long v = padic_valuation(d.get_num(), p, 1L << 30);
        if (seen_v < 0 || v < seen_v) seen_v = v;
        if (2 * v < C2 && (best_v < 0 || v < best_v)) {
          best_v = v;
          res.rows = rows;
          res.cols = cols;
        }
      }
  if (best_v < 0) {
    std::string why = seen_v < 0 ? "every Jacobian minor vanishes at w"
                                 : "smallest Jacobian minor valuation " + std::to_string(seen_v) +
                                       " is not below C2/2 = " + std::to_string(C2) + "/2";
    fail(Errc::SingularPoint, "singular locus: " + why + " (component descent is not implemented)");
  }
  long v = best_v;
  res.minor_valuation = v;

  auto sel_val = [&](const std::vector<Z>& y) {
    long e = target;
    for (int j : res.rows) e = std::min(e, padic_valuation(sys.f[j].eval(y), p, target));
    return e;
  };
  auto prox = [&](const std::vector<Z>& y) {
    long e = target;
    for (int i = 0; i < m; ++i) e = std::min(e, padic_valuation(Z(y[i] - w[i]), p, target));
    return e;
  };

  std::vector<Z> y = w;
  long e = sel_val(y);
  res.steps.push_back({0, y, e, C2, prox(y)});
  int r = static_cast<int>(res.rows.size());
  for (int step = 1; e < target; ++step) {
    if (step > 64) fail(Errc::PrecisionExhausted, "Newton iteration did not reach the target precision");
    long N = std::min(target, 2 * e - 2 * v);
    Z pN = zpow(p, N);
    Mat J = jac_at(y, res.rows, res.cols);
    Q D = det(J);
    if (D == 0 || padic_valuation(D.get_num(), p, 1L << 30) != v)
      fail(Errc::Internal, "minor valuation changed during the Newton iteration");
    Mat inv = inverse(J);
    std::vector<Z> fy(r);
    for (int k = 0; k < r; ++k) fy[k] = sys.f[res.rows[k]].eval(y);
    // δ = J^{-1} f(y) = adj(J) f(y) / D, computed mod p^N.
    Z pv = zpow(p, v);
    Z unit = D.get_num() / pv;
    Z uinv;
    require(mpz_invert(uinv.get_mpz_t(), unit.get_mpz_t(), pN.get_mpz_t()) != 0 || pN == 1, "unit not invertible");
    for (int c = 0; c < r; ++c) {
      Q num = 0;
      for (int k = 0; k < r; ++k) num += inv[c][k] * D * Q(fy[k]);
      require(num.get_den() == 1, "adjugate is not integral");
      Z nz = num.get_num();
      require(mpz_divisible_p(nz.get_mpz_t(), pv.get_mpz_t()) != 0, "Newton correction is not p-integral");
      Z delta = mod(Z(nz / pv * uinv), pN);
      int col = res.cols[c];
      y[col] = mod(Z(y[col] - delta), pN);
    }
    for (int i = 0; i < m; ++i)
      if (std::find(res.cols.begin(), res.cols.end(), i) == res.cols.end()) y[i] = mod(y[i], pN);
    long e2 = sel_val(y);
    if (e2 < N) fail(Errc::Internal, "quadratic convergence bound violated at step " + std::to_string(step));
    res.steps.push_back({step, y, e2, 2 * e - 2 * v, prox(y)});
    e = e2;
  }

  Z pt = zpow(p, target);
  res.exact_root = true;
  for (const auto& f : sys.f) res.exact_root = res.exact_root && f.eval(y) == 0;
  for (auto& c : y) c = mod(c, pt);
  res.y = y;
  res.congruence_ok = true;
  for (int j = 0; j < n; ++j) res.congruence_ok = res.congruence_ok && padic_valuation(sys.f[j].eval(y), p, target) >= target;
  res.proximity = prox(y);
  res.proximity_ok = res.proximity >= std::min(target, C2 - 2 * v);
  if (!res.congruence_ok)
    res.diagnostic = "equations outside the selected square subsystem are not satisfied to the target precision";
  for (const auto& c : y) {
    std::vector<int> ds;
    Z x = c;
    for (long k = 0; k < target; ++k) {
      Z d = mod(x, Z(p));
      ds.push_back(static_cast<int>(d.get_si()));
      x = (x - d) / p;
    }
    res.digits.push_back(std::move(ds));
  }
  return res;
}

}  // namespace unilin
