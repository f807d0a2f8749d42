#include "unilin/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace unilin {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::DependentBasis: return "DependentBasis";
    case Errc::NotClosed: return "NotClosed";
    case Errc::NotNilpotent: return "NotNilpotent";
    case Errc::NotNilpotentAlgebra: return "NotNilpotentAlgebra";
    case Errc::EmptyCatalog: return "EmptyCatalog";
    case Errc::TrivialIntersection: return "TrivialIntersection";
    case Errc::DegenerateLattice: return "DegenerateLattice";
    case Errc::ResolutionNotReached: return "ResolutionNotReached";
    case Errc::ExponentViolation: return "ExponentViolation";
    case Errc::SingularPoint: return "SingularPoint";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::PreconditionUnverifiable: return "PreconditionUnverifiable";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

Q parse_rational(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  require(!s.empty(), "empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string sign;
    std::string body = s;
    if (body[0] == '-' || body[0] == '+') {
      sign = body[0] == '-' ? "-" : "";
      body = body.substr(1);
    }
    dot = body.find('.');
    std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
    require(!(ip.empty() && fp.empty()), "bad decimal literal: " + raw);
    for (char ch : ip + fp) require(std::isdigit(static_cast<unsigned char>(ch)), "bad decimal literal: " + raw);
    Z num(sign + (ip.empty() ? "0" : ip) + fp, 10);
    Z den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    Q r(num, den);
    r.canonicalize();
    return r;
  }
  Q r;
  if (r.set_str(s, 10) != 0) fail(Errc::InvalidArgument, "bad rational literal: " + raw);
  require(r.get_den() != 0, "zero denominator: " + raw);
  r.canonicalize();
  return r;
}

std::string to_string(const Q& x) { return x.get_str(); }
std::string to_string(const Z& x) { return x.get_str(); }

long double log_abs(const Z& x) {
  require(x != 0, "log of zero");
  long e = 0;
  double d = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(std::fabs(static_cast<long double>(d))) + static_cast<long double>(e) * std::log(2.0L);
}

long double log_abs(const Q& x) { return log_abs(Z(x.get_num())) - log_abs(Z(x.get_den())); }

double to_double(const Q& x) {
  if (x == 0) return 0.0;
  long double l = log_abs(x);
  if (l < 700 && l > -700) return x.get_d();
  double m = static_cast<double>(std::exp(l));
  return x < 0 ? -m : m;
}

std::vector<long> PlaceSystem::places() const {
  std::vector<long> out{kInfinity};
  out.insert(out.end(), primes.begin(), primes.end());
  return out;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void PlaceSystem::validate() const {
  std::vector<long> s = primes;
  std::sort(s.begin(), s.end());
  require(std::adjacent_find(s.begin(), s.end()) == s.end(), "duplicate prime in place system");
  for (long p : primes) require(is_prime(p), "place system entry is not prime: " + std::to_string(p));
}

long valuation(const Z& x, long p) {
  require(x != 0, "valuation of zero");
  Z y = x;
  long v = 0;
  Z pp(static_cast<unsigned long>(p));
  while (mpz_divisible_p(y.get_mpz_t(), pp.get_mpz_t())) {
    mpz_divexact(y.get_mpz_t(), y.get_mpz_t(), pp.get_mpz_t());
    ++v;
  }
  return v;
}

long valuation(const Q& x, long p) { return valuation(Z(x.get_num()), p) - valuation(Z(x.get_den()), p); }

Q place_abs(const Q& x, long place) {
  if (x == 0) return 0;
  if (place == kInfinity) return abs(x);
  long v = valuation(x, place);
  Z pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(place), static_cast<unsigned long>(std::labs(v)));
  return v >= 0 ? Q(Z(1), pw) : Q(pw);
}

Q place_norm(const Vec& v, long place) {
  Q best = 0;
  for (const auto& x : v) {
    Q a = place_abs(x, place);
    if (a > best) best = a;
  }
  return best;
}

Q c_fun(const Vec& v, const PlaceSystem& sigma) {
  Q prod = 1;
  for (long pl : sigma.places()) {
    prod *= place_norm(v, pl);
    if (prod == 0) return 0;
  }
  return prod;
}

void ExteriorVector::add(const std::vector<int>& idx, const Q& x) {
  if (x == 0) return;
  auto it = comp.find(idx);
  if (it == comp.end()) {
    comp.emplace(idx, x);
    return;
  }
  it->second += x;
  if (it->second == 0) comp.erase(it);
}

ExteriorVector ExteriorVector::scaled(const Q& s) const {
  ExteriorVector r{degree, ambient, {}};
  if (s == 0) return r;
  for (const auto& [k, v] : comp) r.comp.emplace(k, v * s);
  return r;
}

ExteriorVector ExteriorVector::plus(const ExteriorVector& o) const {
  require(degree == o.degree && ambient == o.ambient, "exterior degree mismatch");
  ExteriorVector r = *this;
  for (const auto& [k, v] : o.comp) r.add(k, v);
  return r;
}

Q place_norm(const ExteriorVector& w, long place) {
  Q best = 0;
  for (const auto& [k, x] : w.comp) {
    Q a = place_abs(x, place);
    if (a > best) best = a;
  }
  return best;
}

Q c_fun(const ExteriorVector& w, const PlaceSystem& sigma) {
  Q prod = 1;
  for (long pl : sigma.places()) {
    prod *= place_norm(w, pl);
    if (prod == 0) return 0;
  }
  return prod;
}

Q sup_norm(const Vec& v) { return place_norm(v, kInfinity); }
Q sup_norm(const ExteriorVector& w) { return place_norm(w, kInfinity); }

ExteriorVector ext_unit(int ambient) {
  ExteriorVector r{0, ambient, {}};
  r.comp.emplace(std::vector<int>{}, Q(1));
  return r;
}

ExteriorVector wedge(const ExteriorVector& w, const Vec& v) {
  require(static_cast<int>(v.size()) == w.ambient, "wedge: ambient mismatch");
  ExteriorVector r{w.degree + 1, w.ambient, {}};
  for (const auto& [idx, a] : w.comp) {
    for (int j = 0; j < w.ambient; ++j) {
      if (v[j] == 0) continue;
      auto pos = std::lower_bound(idx.begin(), idx.end(), j);
      if (pos != idx.end() && *pos == j) continue;
      long after = idx.end() - pos;
      std::vector<int> ni(idx.begin(), pos);
      ni.push_back(j);
      ni.insert(ni.end(), pos, idx.end());
      Q term = a * v[j];
      r.add(ni, (after % 2) ? Q(-term) : term);
    }
  }
  return r;
}

ExteriorVector wedge(const Vec& z, const ExteriorVector& w) {
  ExteriorVector r = wedge(w, z);
  return (w.degree % 2) ? -r : r;
}

ExteriorVector wedge(const std::vector<Vec>& vs, int ambient) {
  ExteriorVector r = ext_unit(ambient);
  for (const auto& v : vs) {
    r = wedge(r, v);
    if (r.is_zero()) {
      r.degree = static_cast<int>(vs.size());
      return r;
    }
  }
  return r;
}

ExteriorVector ext_apply(const Mat& a, const ExteriorVector& w) {
  int n = w.ambient;
  require(static_cast<int>(a.size()) == n, "ext_apply: matrix size mismatch");
  ExteriorVector r{w.degree, n, {}};
  std::vector<Vec> cols(n, Vec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cols[j][i] = a[i][j];
  for (const auto& [idx, c] : w.comp) {
    std::vector<Vec> vs;
    for (int j : idx) vs.push_back(cols[j]);
    r = r.plus(wedge(vs, n).scaled(c));
  }
  return r;
}

std::vector<std::vector<int>> multi_indices(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

Vec ext_coords(const ExteriorVector& w) {
  auto idx = multi_indices(w.ambient, w.degree);
  Vec out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto it = w.comp.find(idx[i]);
    if (it != w.comp.end()) out[i] = it->second;
  }
  return out;
}

ExteriorVector ext_from_coords(const Vec& c, int ambient, int degree) {
  auto idx = multi_indices(ambient, degree);
  require(idx.size() == c.size(), "exterior coordinate length mismatch");
  ExteriorVector r{degree, ambient, {}};
  for (std::size_t i = 0; i < idx.size(); ++i) r.add(idx[i], c[i]);
  return r;
}

int annihilator_dim(const ExteriorVector& w) {
  if (w.is_zero()) return w.ambient;
  std::map<std::vector<int>, int> key;
  std::vector<ExteriorVector> imgs;
  for (int i = 0; i < w.ambient; ++i) {
    Vec e(w.ambient);
    e[i] = 1;
    imgs.push_back(wedge(w, e));
    for (const auto& [k, v] : imgs.back().comp) key.emplace(k, 0);
  }
  int m = 0;
  for (auto& [k, v] : key) v = m++;
  Mat cols;
  for (const auto& im : imgs) {
    Vec c(m);
    for (const auto& [k, v] : im.comp) c[key[k]] = v;
    cols.push_back(c);
  }
  return w.ambient - rank(cols);
}

bool is_integral(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Q& x) { return x.get_den() == 1; });
}

bool is_integral(const ExteriorVector& w) {
  return std::all_of(w.comp.begin(), w.comp.end(), [](const auto& kv) { return kv.second.get_den() == 1; });
}

namespace {

template <class It, class Get>
Q primitive_factor(It b, It e, Get get) {
  Z l = 1, g = 0;
  for (auto it = b; it != e; ++it) {
    const Q& x = get(*it);
    if (x == 0) continue;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  }
  for (auto it = b; it != e; ++it) {
    const Q& x = get(*it);
    if (x == 0) continue;
    Z n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (g == 0) return 1;
  return Q(l, g);
}

}  // namespace

Vec primitive_integer(const Vec& v) {
  Q f = primitive_factor(v.begin(), v.end(), [](const Q& x) -> const Q& { return x; });
  f.canonicalize();
  return scale(v, f);
}

ExteriorVector primitive_integer(const ExteriorVector& w) {
  Q f = primitive_factor(w.comp.begin(), w.comp.end(), [](const auto& kv) -> const Q& { return kv.second; });
  f.canonicalize();
  return w.scaled(f);
}

Vec canonical_sign(const Vec& v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    return x < 0 ? scale(v, Q(-1)) : v;
  }
  return v;
}

ExteriorVector canonical_sign(const ExteriorVector& w) {
  if (w.comp.empty()) return w;
  return w.comp.begin()->second < 0 ? -w : w;
}

Q UnitElement::value(const PlaceSystem& sigma) const {
  require(exponents.size() == sigma.primes.size(), "unit exponent count mismatch");
  Q r = sign < 0 ? -1 : 1;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    Z pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(sigma.primes[i]),
                  static_cast<unsigned long>(std::labs(exponents[i])));
    if (exponents[i] >= 0)
      r *= pw;
    else
      r /= pw;
  }
  return r;
}

UnitMinimization minimize_over_units(const Vec& v, const PlaceSystem& sigma) {
  sigma.validate();
  Q c = c_fun(v, sigma);
  if (c == 0) fail(Errc::ZeroVector, "minimize_over_units: zero vector");
  std::size_t s = sigma.size();
  long double log_target = log_abs(c) / static_cast<long double>(s);
  std::size_t r = sigma.primes.size();
  std::vector<long> e(r);
  for (std::size_t i = 0; i < r; ++i) {
    long p = sigma.primes[i];
    long double lp = log_abs(place_norm(v, p));
    e[i] = std::lround((lp - log_target) / std::log(static_cast<long double>(p)));
  }
  auto evaluate = [&](const std::vector<long>& ex) {
    UnitElement u{1, ex};
    Vec w = scale(v, u.value(sigma));
    Q best = 0;
    for (long pl : sigma.places()) best = std::max(best, place_norm(w, pl));
    return best;
  };
  auto cost_key = [](const std::vector<long>& ex) {
    long t = 0;
    for (long x : ex) t += std::labs(x);
    return t;
  };
  Q best = evaluate(e);
  if (r > 0 && r <= 3) {
    std::vector<long> base = e, cur(r);
    long span = 2;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == r) {
        Q val = evaluate(cur);
        if (val < best || (val == best && cost_key(cur) < cost_key(e))) {
          best = val;
          e = cur;
        }
        return;
      }
      for (long d = -span; d <= span; ++d) {
        cur[i] = base[i] + d;
        rec(i + 1);
      }
    };
    rec(0);
  } else if (r > 3) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < r; ++i)
        for (long d : {-1L, 1L}) {
          auto cand = e;
          cand[i] += d;
          Q val = evaluate(cand);
          if (val < best) {
            best = val;
            e = cand;
            improved = true;
          }
        }
    }
  }
  UnitMinimization out;
  out.r0 = UnitElement{1, e};
  out.rescaled = scale(v, out.r0.value(sigma));
  for (long pl : sigma.places()) out.place_norms.push_back(place_norm(out.rescaled, pl));
  out.sigma_norm = best;
  out.c_value = c;
  out.constant = static_cast<double>(std::exp(log_abs(best) - log_target));
  return out;
}

// ---- linear algebra ----

Mat identity(int n) {
  Mat m = zeros(n, n);
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat zeros(int r, int c) { return Mat(r, Vec(c)); }

Mat mul(const Mat& a, const Mat& b) {
  if (a.empty()) return {};
  std::size_t n = a.size(), m = b.size(), p = b.empty() ? 0 : b[0].size();
  require(a[0].size() == m, "matrix product shape mismatch");
  Mat c(n, Vec(p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < p; ++j)
        if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

Vec mul(const Mat& a, const Vec& v) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(a[i].size() == v.size(), "matrix-vector shape mismatch");
    for (std::size_t j = 0; j < v.size(); ++j)
      if (a[i][j] != 0 && v[j] != 0) out[i] += a[i][j] * v[j];
  }
  return out;
}

Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat t(a[0].size(), Vec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Mat add(const Mat& a, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] += b[i][j];
  return c;
}

Mat sub(const Mat& a, const Mat& b) {
  Mat c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) c[i][j] -= b[i][j];
  return c;
}

Mat scale(const Mat& a, const Q& s) {
  Mat c = a;
  for (auto& row : c)
    for (auto& x : row) x *= s;
  return c;
}

Vec add(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector length mismatch");
  Vec c = a;
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += b[i];
  return c;
}

Vec sub(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector length mismatch");
  Vec c = a;
  for (std::size_t i = 0; i < a.size(); ++i) c[i] -= b[i];
  return c;
}

Vec scale(const Vec& a, const Q& s) {
  Vec c = a;
  for (auto& x : c) x *= s;
  return c;
}

Q dot(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector length mismatch");
  Q s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Q& x) { return x == 0; });
}

bool is_zero(const Mat& m) {
  return std::all_of(m.begin(), m.end(), [](const Vec& r) { return is_zero(r); });
}

Q trace(const Mat& a) {
  Q t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

Q det(Mat a) {
  std::size_t n = a.size();
  Q d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Q f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

Mat inverse(const Mat& a) {
  std::size_t n = a.size();
  Mat m = a, inv = identity(static_cast<int>(n));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) fail(Errc::DependentBasis, "matrix is singular");
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    Q f = 1 / m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] *= f;
      inv[c][j] *= f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      Q g = m[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        if (m[c][j] != 0) m[i][j] -= g * m[c][j];
        if (inv[c][j] != 0) inv[i][j] -= g * inv[c][j];
      }
    }
  }
  return inv;
}

Q sup_norm(const Mat& m) {
  Q best = 0;
  for (const auto& r : m)
    for (const auto& x : r)
      if (abs(x) > best) best = abs(x);
  return best;
}

Rref rref(const Mat& rows) {
  Rref out;
  if (rows.empty()) return out;
  Mat m = rows;
  std::size_t nr = m.size(), nc = m[0].size(), r = 0;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t p = r;
    while (p < nr && m[p][c] == 0) ++p;
    if (p == nr) continue;
    std::swap(m[p], m[r]);
    Q f = 1 / m[r][c];
    for (std::size_t j = c; j < nc; ++j) m[r][j] *= f;
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Q g = m[i][c];
      for (std::size_t j = c; j < nc; ++j)
        if (m[r][j] != 0) m[i][j] -= g * m[r][j];
    }
    out.pivots.push_back(static_cast<int>(c));
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

int rank(const Mat& rows) { return static_cast<int>(rref(rows).pivots.size()); }

std::vector<Vec> nullspace(const Mat& a, int ncols) {
  Rref r = rref(a);
  std::vector<bool> is_piv(ncols, false);
  for (int p : r.pivots) is_piv[p] = true;
  std::vector<Vec> out;
  for (int f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    Vec x(ncols);
    x[f] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) x[r.pivots[i]] = -r.rows[i][f];
    out.push_back(x);
  }
  return out;
}

std::vector<Vec> span_basis(const std::vector<Vec>& vs) { return rref(vs).rows; }

bool in_span(const std::vector<Vec>& basis, const Vec& v) {
  if (is_zero(v)) return true;
  if (basis.empty()) return false;
  Mat m = basis;
  int r0 = rank(m);
  m.push_back(v);
  return rank(m) == r0;
}

bool subspace_of(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty()) return true;
  Mat m = b;
  int r0 = b.empty() ? 0 : rank(m);
  m.insert(m.end(), a.begin(), a.end());
  return rank(m) == r0;
}

bool same_span(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  return subspace_of(a, b) && subspace_of(b, a);
}

std::vector<Vec> intersect(const std::vector<Vec>& a0, const std::vector<Vec>& b0) {
  auto a = span_basis(a0), b = span_basis(b0);
  if (a.empty() || b.empty()) return {};
  std::size_t n = a[0].size(), ka = a.size(), kb = b.size();
  Mat m(n, Vec(ka + kb));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ka; ++j) m[i][j] = a[j][i];
    for (std::size_t j = 0; j < kb; ++j) m[i][ka + j] = -b[j][i];
  }
  std::vector<Vec> out;
  for (const auto& x : nullspace(m, static_cast<int>(ka + kb))) {
    Vec v(n);
    for (std::size_t j = 0; j < ka; ++j)
      if (x[j] != 0) v = add(v, scale(a[j], x[j]));
    out.push_back(v);
  }
  return span_basis(out);
}

std::vector<Vec> annihilator(const std::vector<Vec>& basis, int n) {
  if (basis.empty()) {
    std::vector<Vec> out;
    for (int i = 0; i < n; ++i) {
      Vec e(n);
      e[i] = 1;
      out.push_back(e);
    }
    return out;
  }
  return nullspace(basis, n);
}

SpanCoords::SpanCoords(const std::vector<Vec>& basis) : basis_(basis) {
  std::size_t k = basis.size();
  if (k == 0) return;
  std::size_t n = basis[0].size();
  red_ = basis;
  tr_ = identity(static_cast<int>(k));
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < k; ++c) {
    std::size_t p = r;
    while (p < k && red_[p][c] == 0) ++p;
    if (p == k) continue;
    std::swap(red_[p], red_[r]);
    std::swap(tr_[p], tr_[r]);
    Q f = 1 / red_[r][c];
    for (auto& x : red_[r]) x *= f;
    for (auto& x : tr_[r]) x *= f;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == r || red_[i][c] == 0) continue;
      Q g = red_[i][c];
      for (std::size_t j = 0; j < n; ++j)
        if (red_[r][j] != 0) red_[i][j] -= g * red_[r][j];
      for (std::size_t j = 0; j < k; ++j)
        if (tr_[r][j] != 0) tr_[i][j] -= g * tr_[r][j];
    }
    piv_.push_back(static_cast<int>(c));
    ++r;
  }
  if (r < k) fail(Errc::DependentBasis, "basis vectors are linearly dependent");
}

bool SpanCoords::reduce(Vec& v, Vec& c) const {
  c.assign(basis_.size(), Q(0));
  for (std::size_t i = 0; i < piv_.size(); ++i) {
    Q x = v[piv_[i]];
    if (x == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (red_[i][j] != 0) v[j] -= x * red_[i][j];
    for (std::size_t j = 0; j < c.size(); ++j)
      if (tr_[i][j] != 0) c[j] += x * tr_[i][j];
  }
  return is_zero(v);
}

bool SpanCoords::contains(const Vec& v) const {
  if (basis_.empty()) return is_zero(v);
  Vec w = v, c;
  return reduce(w, c);
}

Vec SpanCoords::coords(const Vec& v) const {
  if (basis_.empty()) {
    require(is_zero(v), "vector outside span");
    return {};
  }
  Vec w = v, c;
  if (!reduce(w, c)) fail(Errc::InvalidArgument, "vector outside span");
  return c;
}

std::vector<Q> char_poly(const Mat& a) {
  int n = static_cast<int>(a.size());
  std::vector<Q> c(n + 1);
  c[n] = 1;
  Mat m = zeros(n, n);
  for (int k = 1; k <= n; ++k) {
    Mat am = mul(a, m);
    for (int i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
    m = am;
    c[n - k] = -trace(mul(a, m)) / k;
  }
  return c;
}

namespace {

Z fdiv(const Z& a, const Z& b) {
  Z q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

std::vector<std::vector<Z>> hnf_rows(std::vector<std::vector<Z>> rows, int ncols) {
  std::size_t m = rows.size(), r = 0;
  for (int c = 0; c < ncols && r < m; ++c) {
    bool have = false;
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (rows[i][c] != 0 && (best == m || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
      if (best == m) break;
      have = true;
      std::swap(rows[best], rows[r]);
      bool more = false;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (rows[i][c] == 0) continue;
        Z q = fdiv(rows[i][c], rows[r][c]);
        for (int j = c; j < ncols; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][c] != 0) more = true;
      }
      if (!more) break;
    }
    if (!have) continue;
    if (rows[r][c] < 0)
      for (int j = c; j < ncols; ++j) rows[r][j] = -rows[r][j];
    for (std::size_t i = 0; i < r; ++i) {
      Z q = fdiv(rows[i][c], rows[r][c]);
      if (q == 0) continue;
      for (int j = c; j < ncols; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::vector<Vec> saturate(const std::vector<Vec>& basis) {
  if (basis.empty()) return {};
  std::size_t k = basis.size(), n = basis[0].size();
  if (rank(basis) != static_cast<int>(k)) fail(Errc::DependentBasis, "basis vectors are linearly dependent");
  Mat b;
  for (const auto& v : basis) b.push_back(primitive_integer(v));
  std::vector<std::vector<Z>> cols(n, std::vector<Z>(k));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < k; ++i) cols[j][i] = b[i][j].get_num();
  auto h = hnf_rows(cols, static_cast<int>(k));
  if (h.size() != k) fail(Errc::Internal, "saturation: column lattice rank deficit");
  Mat hm(k, Vec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < k; ++c) hm[i][c] = h[c][i];
  Mat c = mul(inverse(hm), b);
  std::vector<std::vector<Z>> zr(k, std::vector<Z>(n));
  for (std::size_t i = 0; i < k; ++i) {
    if (!is_integral(c[i])) fail(Errc::Internal, "saturation produced a non-integral vector");
    for (std::size_t j = 0; j < n; ++j) zr[i][j] = c[i][j].get_num();
  }
  auto canon = hnf_rows(zr, static_cast<int>(n));
  std::vector<Vec> out;
  for (const auto& row : canon) {
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = row[j];
    out.push_back(v);
  }
  return out;
}

PrimitiveVector primitive_integral_vector(const std::vector<Vec>& basis, int ambient) {
  for (const auto& v : basis) require(static_cast<int>(v.size()) == ambient, "basis vector has wrong length");
  PrimitiveVector out;
  if (basis.empty()) {
    out.v = ext_unit(ambient);
    out.height = 1;
    return out;
  }
  out.zbasis = saturate(basis);
  ExteriorVector w = wedge(out.zbasis, ambient);
  if (w.is_zero()) fail(Errc::DependentBasis, "basis vectors are linearly dependent");
  ExteriorVector c = canonical_sign(w);
  if (!(c == w)) out.zbasis[0] = scale(out.zbasis[0], Q(-1));
  if (!(primitive_integer(c) == c)) fail(Errc::Internal, "wedge of a saturated basis is not primitive");
  out.v = c;
  out.height = sup_norm(c).get_num();
  return out;
}

}  // namespace unilin
