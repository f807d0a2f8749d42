#include "unilin/measure.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

#include "unilin/lattice.hpp"

namespace unilin {

namespace {

Z floor_z(const Q& x) {
  Z r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Q q_of(double x) {
  Q r(x);
  r.canonicalize();
  return r;
}

// Least-squares slope of ys against xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t n = xs.size();
  if (n < 2) return 0;
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx == 0 ? 0 : sxy / sxx;
}

}  // namespace

int UPoly::degree() const {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    if (c[i] != 0) return i;
  return 0;
}

Q UPoly::operator()(const Q& t) const {
  Q r = 0;
  for (size_t i = c.size(); i-- > 0;) r = r * t + c[i];
  return r;
}

UPoly parse_upoly(const std::string& s, char var) {
  UPoly p;
  size_t i = 0, n = s.size();
  auto skip = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto add = [&](int k, const Q& v) {
    if (static_cast<int>(p.c.size()) <= k) p.c.resize(k + 1, Q(0));
    p.c[k] += v;
  };
  skip();
  require(i < n, "empty polynomial");
  bool first = true;
  while (true) {
    skip();
    if (i >= n) break;
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else {
      require(first, "expected + or - in polynomial '" + s + "'");
    }
    first = false;
    Q coef = 1;
    bool have_coef = false;
    if (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
      size_t j = i;
      while (j < n && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
      coef = parse_rational(s.substr(i, j - i));
      i = j;
      have_coef = true;
      skip();
      if (i < n && s[i] == '*') {
        ++i;
        skip();
        require(i < n && s[i] == var, "expected variable after '*'");
      }
    }
    int k = 0;
    if (i < n && s[i] == var) {
      ++i;
      k = 1;
      skip();
      if (i < n && s[i] == '^') {
        ++i;
        skip();
        size_t j = i;
        while (j < n && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        require(j > i, "expected exponent");
        k = std::stoi(s.substr(i, j - i));
        i = j;
      }
    } else {
      require(have_coef, "malformed term in polynomial '" + s + "'");
    }
    add(k, coef * sign);
  }
  if (p.c.empty()) p.c.push_back(0);
  return p;
}

std::string to_string(const UPoly& p, char var) {
  std::ostringstream os;
  bool any = false;
  for (size_t k = p.c.size(); k-- > 0;) {
    if (p.c[k] == 0) continue;
    Q a = abs(p.c[k]);
    os << (p.c[k] < 0 ? (any ? " - " : "-") : (any ? " + " : ""));
    if (k == 0 || a != 1) os << to_string(a) << (k > 0 ? "*" : "");
    if (k > 0) os << var;
    if (k > 1) os << '^' << k;
    any = true;
  }
  if (!any) os << "0";
  return os.str();
}

std::pair<Q, Q> bernstein_range(const UPoly& p, const Q& a, const Q& b) {
  int n = p.degree();
  // Taylor shift to a, then scale by h = b - a.
  std::vector<Q> q(p.c.begin(), p.c.begin() + n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= i; --j) q[j] += a * q[j + 1];
  Q h = b - a, hp = 1;
  for (int k = 0; k <= n; ++k) {
    q[k] *= hp;
    hp *= h;
  }
  // Binomials C(n, j).
  std::vector<Z> bin(n + 1);
  bin[0] = 1;
  for (int j = 1; j <= n; ++j) bin[j] = bin[j - 1] * (n - j + 1) / j;
  Q lo, hi;
  for (int k = 0; k <= n; ++k) {
    Q bk = 0;
    Z ckj = 1;  // C(k, j)
    for (int j = 0; j <= k; ++j) {
      if (j > 0) ckj = ckj * (k - j + 1) / j;
      bk += q[j] * Q(ckj, bin[j]);
    }
    if (k == 0 || bk < lo) lo = bk;
    if (k == 0 || bk > hi) hi = bk;
  }
  return {lo, hi};
}

namespace {

// Enclosure of max_j |p_j| on [a, b].
std::pair<Q, Q> abs_range(const std::vector<UPoly>& comps, const Q& a, const Q& b) {
  Q lo = 0, hi = 0;
  for (const auto& p : comps) {
    auto [l, h] = bernstein_range(p, a, b);
    Q al, ah;
    if (l >= 0) {
      al = l;
      ah = h;
    } else if (h <= 0) {
      al = -h;
      ah = -l;
    } else {
      al = 0;
      ah = std::max(Q(-l), h);
    }
    if (al > lo) lo = al;
    if (ah > hi) hi = ah;
  }
  return {lo, hi};
}

Q abs_max(const std::vector<UPoly>& comps, const Q& t) {
  Q m = 0;
  for (const auto& p : comps) {
    Q v = abs(p(t));
    if (v > m) m = v;
  }
  return m;
}

}  // namespace

FriendlyMeasure FriendlyMeasure::lebesgue() { return {}; }

FriendlyMeasure FriendlyMeasure::cantor() { return digit(3, {0, 2}, {Q(1, 2), Q(1, 2)}); }

FriendlyMeasure FriendlyMeasure::digit(int base, std::vector<int> digits, std::vector<Q> weights) {
  FriendlyMeasure m;
  m.kind = Kind::Digit;
  m.base = base;
  m.digits = std::move(digits);
  m.weights = std::move(weights);
  m.validate();
  return m;
}

FriendlyMeasure FriendlyMeasure::table(std::vector<std::pair<Q, Q>> atoms) {
  FriendlyMeasure m;
  m.kind = Kind::Table;
  m.atoms = std::move(atoms);
  std::sort(m.atoms.begin(), m.atoms.end());
  m.validate();
  return m;
}

void FriendlyMeasure::validate() const {
  require(dim == 1, "only measures on the line are supported (dimension " + std::to_string(dim) + ")");
  if (kind == Kind::Digit) {
    require(base >= 2, "digit measure base must be at least 2");
    require(!digits.empty() && digits.size() == weights.size(), "digits and weights must have equal nonzero length");
    Q total = 0;
    std::vector<int> seen;
    for (size_t i = 0; i < digits.size(); ++i) {
      require(digits[i] >= 0 && digits[i] < base, "digit out of range");
      require(std::find(seen.begin(), seen.end(), digits[i]) == seen.end(), "repeated digit");
      seen.push_back(digits[i]);
      require(weights[i] > 0, "weights must be positive");
      total += weights[i];
    }
    require(total == 1, "weights must sum to 1");
  } else if (kind == Kind::Table) {
    require(!atoms.empty(), "empty atom table");
    for (const auto& [x, w] : atoms) require(w > 0, "atom masses must be positive");
  }
}

std::string FriendlyMeasure::name() const {
  switch (kind) {
    case Kind::Lebesgue:
      return "lebesgue";
    case Kind::Digit:
      return "digit";
    case Kind::Table:
      return "table";
  }
  return "?";
}

Q FriendlyMeasure::cdf(const Q& x) const {
  switch (kind) {
    case Kind::Lebesgue:
      return x;
    case Kind::Table: {
      Q s = 0;
      for (const auto& [p, w] : atoms)
        if (p <= x) s += w;
      return s;
    }
    case Kind::Digit:
      break;
  }
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  // F(x) = a + c F(frac(base x)); the orbit of a rational is eventually periodic.
  std::vector<Q> as, cs;
  std::map<Q, size_t> seen;
  Q cur = x;
  long cycle_at = -1;
  while (true) {
    if (cur <= 0) break;
    auto it = seen.find(cur);
    if (it != seen.end()) {
      cycle_at = static_cast<long>(it->second);
      break;
    }
    seen.emplace(cur, as.size());
    Q y = cur * base;
    Z d = floor_z(y);
    int di = static_cast<int>(d.get_si());
    Q a = 0, c = 0;
    for (size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] < di) a += weights[i];
      if (digits[i] == di) c = weights[i];
    }
    as.push_back(a);
    cs.push_back(c);
    if (c == 0) break;
    cur = y - d;
  }
  Q tail = 0;
  size_t end = as.size();
  if (cycle_at >= 0) {
    Q A = 0, C = 1;
    for (size_t i = end; i-- > static_cast<size_t>(cycle_at);) {
      A = as[i] + cs[i] * A;
      C = cs[i] * C;
    }
    if (C == 1) fail(Errc::Internal, "degenerate digit measure cycle");
    tail = A / (1 - C);
    end = static_cast<size_t>(cycle_at);
  }
  for (size_t i = end; i-- > 0;) tail = as[i] + cs[i] * tail;
  return tail;
}

Q FriendlyMeasure::cdf_left(const Q& x) const {
  if (kind != Kind::Table) return cdf(x);
  Q s = 0;
  for (const auto& [p, w] : atoms)
    if (p < x) s += w;
  return s;
}

Q FriendlyMeasure::open(const Q& a, const Q& b) const {
  if (b <= a) return 0;
  return cdf_left(b) - cdf(a);
}

Q FriendlyMeasure::half_open(const Q& a, const Q& b) const {
  if (b <= a) return 0;
  return cdf_left(b) - cdf_left(a);
}

Q FriendlyMeasure::closed(const Q& a, const Q& b) const {
  if (b < a) return 0;
  return cdf(b) - cdf_left(a);
}

double FriendlyMeasure::dimension_alpha() const {
  switch (kind) {
    case Kind::Lebesgue:
      return 1.0;
    case Kind::Table:
      return 0.0;
    case Kind::Digit: {
      double a = 1e300;
      for (const auto& w : weights) a = std::min(a, -std::log(to_double(w)) / std::log(static_cast<double>(base)));
      return a;
    }
  }
  return 0;
}

int PolynomialMap::degree() const {
  int d = 0;
  for (const auto& f : factors)
    for (const auto& p : f.comps) d = std::max(d, p.degree());
  return d;
}

SupBracket sup_bracket(const MapFactor& f, double rel_tol) {
  require(!f.comps.empty(), "polynomial map has no components");
  require(f.a < f.b, "degenerate domain interval");
  int d = 0;
  for (const auto& p : f.comps) d = std::max(d, p.degree());
  Q mid = (f.a + f.b) / 2, half = (f.b - f.a) / 2;
  Q lo = 0;
  for (const auto& x : chebyshev_grid(std::max(d, 1))) lo = std::max(lo, abs_max(f.comps, Q(mid + half * x)));
  require(lo > 0 || d > 0, "polynomial map vanishes identically");

  struct Node {
    Q a, b, up;
    bool operator<(const Node& o) const { return up < o.up; }
  };
  std::priority_queue<Node> pq;
  pq.push({f.a, f.b, abs_range(f.comps, f.a, f.b).second});
  Q factor = 1 + q_of(rel_tol);
  for (int it = 0; it < 200000 && !pq.empty(); ++it) {
    const Node& top = pq.top();
    if (top.up <= lo * factor) break;
    Node n = top;
    pq.pop();
    Q m = (n.a + n.b) / 2;
    lo = std::max(lo, abs_max(f.comps, m));
    pq.push({n.a, m, abs_range(f.comps, n.a, m).second});
    pq.push({m, n.b, abs_range(f.comps, m, n.b).second});
  }
  require(lo > 0, "polynomial map vanishes identically");
  Q hi = pq.empty() ? lo : std::max(lo, pq.top().up);
  return {lo, hi};
}

double SublevelResult::ratio_lo() const { return to_double(Q(lower / total)); }
double SublevelResult::ratio_hi() const { return to_double(Q(upper / total)); }

namespace {

struct Box {
  std::vector<std::pair<Q, Q>> iv;
  Q mass;
  bool operator<(const Box& o) const { return mass < o.mass; }
};

Q box_mass(const PolynomialMap& F, const std::vector<std::pair<Q, Q>>& iv) {
  Q m = 1;
  for (size_t v = 0; v < iv.size(); ++v) {
    const auto& f = F.factors[v];
    Q part = iv[v].second == f.b ? f.mu.closed(iv[v].first, iv[v].second)
                                 : f.mu.half_open(iv[v].first, iv[v].second);
    m *= part;
    if (m == 0) break;
  }
  return m;
}

}  // namespace

SublevelResult sublevel_measure(const PolynomialMap& F, const Q& delta, const SublevelParams& p) {
  require(!F.factors.empty(), "polynomial map has no factors");
  require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
  require(F.degree() >= 1, "polynomial map must have degree at least 1");
  SublevelResult r;
  r.delta = delta;
  r.sup = {1, 1};
  for (const auto& f : F.factors) {
    f.mu.validate();
    SupBracket s = sup_bracket(f, p.sup_tol);
    r.sup.lo *= s.lo;
    r.sup.hi *= s.hi;
  }
  Q in_below = delta * r.sup.lo, out_above = delta * r.sup.hi;

  std::vector<std::pair<Q, Q>> root;
  for (const auto& f : F.factors) root.push_back({f.a, f.b});
  r.total = box_mass(F, root);
  require(r.total > 0, "domain has zero measure");

  Q lower = 0, undecided = 0;
  std::priority_queue<Box> pq;
  auto classify = [&](std::vector<std::pair<Q, Q>> iv) {
    Q m = box_mass(F, iv);
    if (m == 0) return;
    ++r.boxes;
    Q lo = 1, hi = 1;
    for (size_t v = 0; v < iv.size(); ++v) {
      auto [l, h] = abs_range(F.factors[v].comps, iv[v].first, iv[v].second);
      lo *= l;
      hi *= h;
    }
    if (hi < in_below) {
      lower += m;
    } else if (lo >= out_above) {
      return;
    } else {
      undecided += m;
      pq.push({std::move(iv), m});
    }
  };
  classify(root);
  Q rel = q_of(p.rel_res), absr = q_of(p.abs_res) * r.total;
  while (!pq.empty()) {
    if (undecided <= rel * lower || undecided <= absr) break;
    if (r.boxes >= p.max_boxes) {
      r.resolved = false;
      break;
    }
    Box b = pq.top();
    pq.pop();
    undecided -= b.mass;
    // Children: split every coordinate into base pieces.
    std::vector<std::vector<std::pair<Q, Q>>> parts(b.iv.size());
    for (size_t v = 0; v < b.iv.size(); ++v) {
      int m = F.factors[v].mu.kind == FriendlyMeasure::Kind::Digit ? F.factors[v].mu.base : 2;
      Q w = (b.iv[v].second - b.iv[v].first) / m;
      for (int k = 0; k < m; ++k)
        parts[v].push_back({b.iv[v].first + w * k, k + 1 == m ? b.iv[v].second : Q(b.iv[v].first + w * (k + 1))});
    }
    std::vector<size_t> idx(b.iv.size(), 0);
    while (true) {
      std::vector<std::pair<Q, Q>> iv;
      for (size_t v = 0; v < idx.size(); ++v) iv.push_back(parts[v][idx[v]]);
      classify(std::move(iv));
      size_t v = 0;
      while (v < idx.size() && ++idx[v] == parts[v].size()) idx[v++] = 0;
      if (v == idx.size()) break;
    }
  }
  r.lower = lower;
  r.upper = lower + undecided;
  return r;
}

RemezFit remez_verify(const PolynomialMap& F, int d, const std::vector<Q>& deltas, double tolerance,
                      const SublevelParams& p) {
  require(d >= 1, "declared degree must be at least 1");
  require(d >= F.degree(), "declared degree is below the true degree");
  require(deltas.size() >= 2, "need at least two delta values");
  RemezFit fit;
  double alpha = 1e300;
  for (const auto& f : F.factors) alpha = std::min(alpha, f.mu.dimension_alpha());
  fit.target = alpha / d;
  int s = static_cast<int>(F.factors.size());
  fit.log_corrected = s > 1;
  std::vector<double> xs, ys;
  for (const auto& delta : deltas) {
    SublevelResult r = sublevel_measure(F, delta, p);
    double ld = static_cast<double>(log_abs(delta));
    double corr = (s - 1) * std::log(std::fabs(ld));
    double hi = r.ratio_hi(), lo = r.ratio_lo();
    double mid = lo > 0 ? 0.5 * (std::log(lo) + std::log(hi)) : std::log(hi);
    if (hi > 0) {
      xs.push_back(ld);
      ys.push_back(mid - corr);
      fit.constant = std::max(fit.constant, std::exp(std::log(hi) - corr - fit.target * ld));
    }
    fit.rows.push_back(std::move(r));
  }
  require(xs.size() >= 2, "sublevel sets are null for all but one delta");
  fit.exponent = slope(xs, ys);
  if (fit.exponent < fit.target - tolerance) {
    std::ostringstream os;
    os << "fitted exponent " << fit.exponent << " below " << fit.target << " - " << tolerance;
    fail(Errc::ExponentViolation, os.str());
  }
  return fit;
}

FedererResult federer_check(const FriendlyMeasure& mu, const std::vector<Q>& centers, const std::vector<Q>& radii) {
  mu.validate();
  require(!centers.empty() && !radii.empty(), "need sample centers and radii");
  FedererResult res;
  res.max_ratio = 0;
  res.atomic = mu.kind == FriendlyMeasure::Kind::Table;
  for (const auto& y : centers)
    for (const auto& r : radii) {
      require(r > 0, "radii must be positive");
      Q small = mu.open(y - r, y + r);
      if (small == 0) {
        res.finite = false;
        res.at_center = y;
        res.at_radius = r;
        continue;
      }
      Q ratio = mu.open(y - 3 * r, y + 3 * r) / small;
      if (ratio > res.max_ratio) {
        res.max_ratio = ratio;
        if (res.finite) {
          res.at_center = y;
          res.at_radius = r;
        }
      }
    }
  return res;
}

std::vector<Q> support_points(const FriendlyMeasure& mu, int level) {
  require(mu.kind == FriendlyMeasure::Kind::Digit, "support points need a digit measure");
  require(level >= 0 && level <= 16, "support level out of range");
  std::vector<Q> pts{Q(0)};
  Q scale = 1;
  for (int l = 0; l < level; ++l) {
    scale /= mu.base;
    std::vector<Q> next;
    for (const auto& x : pts)
      for (int dg : mu.digits) next.push_back(x + scale * dg);
    pts.swap(next);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

namespace {

// Left endpoints of level-`level` cylinders of a digit measure meeting (lo, hi).
void cylinders_in(const FriendlyMeasure& mu, const Q& x, const Q& len, int level, const Q& lo, const Q& hi,
                  std::vector<Q>& out, size_t cap) {
  if (out.size() >= cap || x >= hi || x + len <= lo) return;
  if (level == 0) {
    out.push_back(x);
    return;
  }
  Q sub = len / mu.base;
  for (int dg : mu.digits) cylinders_in(mu, x + sub * dg, sub, level - 1, lo, hi, out, cap);
}

}  // namespace

DecayResult decaying_check(const FriendlyMeasure& mu, const std::vector<Q>& centers, const std::vector<Q>& radii,
                           const std::vector<Q>& s_values, int points_per_interval) {
  mu.validate();
  require(!centers.empty() && !radii.empty() && s_values.size() >= 2, "need centers, radii and two s values");
  require(points_per_interval >= 2, "need at least two sample points per interval");
  DecayResult res;
  std::vector<double> xs, ys;
  for (const auto& s : s_values) {
    require(s > 0 && s < 1, "s must lie in (0, 1)");
    Q best = 0;
    for (const auto& y : centers)
      for (const auto& r : radii) {
        Q mj = mu.open(y - r, y + r);
        if (mj == 0) continue;
        Q delta = s * r;
        std::vector<Q> as{y};
        for (int i = 0; i < points_per_interval; ++i) as.push_back(y - r + Q(2 * i, points_per_interval - 1) * r);
        if (mu.kind == FriendlyMeasure::Kind::Digit) {
          int level = 0;
          Q len = 1;
          while (len > delta && level < 24) len /= mu.base, ++level;
          cylinders_in(mu, Q(0), Q(1), level, y - r, y + r, as, 4096);
        } else if (mu.kind == FriendlyMeasure::Kind::Table) {
          for (const auto& [x, w] : mu.atoms) as.push_back(x);
        }
        for (const auto& a : as) {
          Q lo = std::max(Q(y - r), Q(a - delta)), hi = std::min(Q(y + r), Q(a + delta));
          Q ratio = mu.open(lo, hi) / mj;
          if (ratio > best) best = ratio;
        }
      }
    res.rows.push_back({s, best});
    if (best > 0) {
      xs.push_back(static_cast<double>(log_abs(s)));
      ys.push_back(static_cast<double>(log_abs(best)));
    }
  }
  res.alpha = slope(xs, ys);
  for (size_t i = 0; i < xs.size(); ++i) res.c = std::max(res.c, std::exp(ys[i] - res.alpha * xs[i]));
  res.decaying = res.alpha > 0.05;
  return res;
}

}  // namespace unilin
