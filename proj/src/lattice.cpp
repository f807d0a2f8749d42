#include "unilin/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace unilin {

Vec LatticeBasis::combine(const ZVec& x) const {
  require(x.size() == vectors.size(), "coefficient vector has wrong length");
  Vec v(ambient);
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] != 0) v = add(v, scale(vectors[j], Q(x[j])));
  return v;
}

LatticeBasis make_lattice(const std::vector<Vec>& vectors) {
  require(!vectors.empty(), "lattice needs at least one vector");
  LatticeBasis l;
  l.ambient = static_cast<int>(vectors[0].size());
  for (const auto& v : vectors) require(static_cast<int>(v.size()) == l.ambient, "lattice vectors differ in length");
  if (rank(vectors) != static_cast<int>(vectors.size())) fail(Errc::DegenerateLattice, "lattice vectors are dependent");
  l.vectors = vectors;
  return l;
}

LatticeBasis column_lattice(const Mat& g) { return make_lattice(transpose(g)); }

LatticeBasis adjoint_lattice(const Mat& g, const MatrixLieAlgebra& ambient) {
  require(static_cast<int>(g.size()) == ambient.n, "group element has wrong size");
  auto ib = integral_basis(ambient).basis;
  Mat ad = adjoint(g);
  std::vector<Vec> vs;
  for (const auto& e : ib) vs.push_back(mul(ad, e));
  LatticeBasis l = make_lattice(vs);
  l.frame = ib;
  return l;
}

LatticeBasis transform_lattice(const Mat& m, const LatticeBasis& l) {
  LatticeBasis out = l;
  for (auto& v : out.vectors) v = mul(m, v);
  out.ambient = static_cast<int>(m.size());
  return out;
}

Z floor_q(const Q& x) {
  Z r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

Z round_q(const Q& x) { return floor_q(x + Q(1, 2)); }

namespace {

struct Gso {
  Mat mu;
  std::vector<Q> B;
};

Gso gso(const std::vector<Vec>& b) {
  std::size_t r = b.size();
  Gso g{zeros(static_cast<int>(r), static_cast<int>(r)), std::vector<Q>(r)};
  std::vector<Vec> bs(r);
  for (std::size_t i = 0; i < r; ++i) {
    bs[i] = b[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (g.B[j] == 0) continue;
      g.mu[i][j] = dot(b[i], bs[j]) / g.B[j];
      bs[i] = sub(bs[i], scale(bs[j], g.mu[i][j]));
    }
    g.B[i] = dot(bs[i], bs[i]);
  }
  return g;
}

ZVec zadd_scaled(const ZVec& a, const ZVec& b, const Z& s) {
  ZVec out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= s * b[i];
  return out;
}

}  // namespace

LllResult lll(const std::vector<Vec>& gens, const Q& delta) {
  LllResult res;
  std::size_t m = gens.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (is_zero(gens[i])) continue;
    res.basis.push_back(gens[i]);
    ZVec t(m, Z(0));
    t[i] = 1;
    res.transform.push_back(t);
  }
  auto& b = res.basis;
  auto& T = res.transform;
  if (b.size() < 2) return res;
  Gso g = gso(b);

  auto size_reduce = [&](std::size_t k, std::size_t l) {
    Z r = round_q(g.mu[k][l]);
    if (r == 0) return;
    Q rq(r);
    b[k] = sub(b[k], scale(b[l], rq));
    T[k] = zadd_scaled(T[k], T[l], r);
    for (std::size_t j = 0; j < l; ++j) g.mu[k][j] -= rq * g.mu[l][j];
    g.mu[k][l] -= rq;
  };
  auto erase = [&](std::size_t k) {
    b.erase(b.begin() + static_cast<long>(k));
    T.erase(T.begin() + static_cast<long>(k));
    g = gso(b);
  };

  std::size_t k = 1;
  while (k < b.size()) {
    size_reduce(k, k - 1);
    if (is_zero(b[k])) {
      erase(k);
      continue;
    }
    Q mu = g.mu[k][k - 1];
    if (g.B[k] < (delta - mu * mu) * g.B[k - 1]) {
      std::swap(b[k], b[k - 1]);
      std::swap(T[k], T[k - 1]);
      Q bp = g.B[k] + mu * mu * g.B[k - 1];
      if (bp == 0 || g.B[k - 1] == 0) {
        g = gso(b);
      } else {
        Q bk1 = g.B[k - 1];
        g.mu[k][k - 1] = mu * bk1 / bp;
        g.B[k] = bk1 * g.B[k] / bp;
        g.B[k - 1] = bp;
        for (std::size_t j = 0; j + 1 < k; ++j) std::swap(g.mu[k - 1][j], g.mu[k][j]);
        for (std::size_t i = k + 1; i < b.size(); ++i) {
          Q t = g.mu[i][k];
          g.mu[i][k] = g.mu[i][k - 1] - mu * t;
          g.mu[i][k - 1] = t + g.mu[k][k - 1] * g.mu[i][k];
        }
      }
      if (k == 1 && g.B[0] == 0) {
        erase(0);
        continue;
      }
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) size_reduce(k, l);
      ++k;
    }
  }
  if (!b.empty() && is_zero(b[0])) erase(0);
  return res;
}

void enumerate_lattice(const LatticeBasis& l, const std::function<Q()>& radius2,
                       const std::function<void(const Vec&, const ZVec&)>& visit) {
  auto red = lll(l.vectors);
  if (red.basis.size() != l.vectors.size()) fail(Errc::DegenerateLattice, "lattice vectors are dependent");
  Gso g = gso(red.basis);
  int r = static_cast<int>(red.basis.size());
  std::size_t m = l.vectors.size();
  ZVec y(r);

  std::function<void(int, const Q&, bool)> rec = [&](int i, const Q& above, bool zero_above) {
    Q c = 0;
    for (int j = i + 1; j < r; ++j)
      if (y[j] != 0) c -= g.mu[j][i] * Q(y[j]);
    auto step = [&](const Z& xi) {
      Q d = Q(xi) - c;
      Q used = above + d * d * g.B[i];
      if (used > radius2()) return false;
      y[i] = xi;
      if (i == 0) {
        if (!(zero_above && xi == 0)) {
          Vec v(l.ambient);
          ZVec x(m, Z(0));
          for (int k = 0; k < r; ++k) {
            if (y[k] == 0) continue;
            v = add(v, scale(red.basis[k], Q(y[k])));
            for (std::size_t j = 0; j < m; ++j) x[j] += y[k] * red.transform[k][j];
          }
          visit(v, x);
        }
      } else {
        rec(i - 1, used, zero_above && xi == 0);
      }
      return true;
    };
    if (zero_above) {
      for (Z xi = 0; step(xi); ++xi) {
      }
    } else {
      Z x0 = round_q(c);
      for (Z xi = x0; step(xi); ++xi) {
      }
      for (Z xi = x0 - 1; step(xi); --xi) {
      }
    }
    y[i] = 0;
  };
  rec(r - 1, Q(0), true);
}

ShortVector shortest_c(const LatticeBasis& l) {
  auto red = lll(l.vectors);
  ShortVector best;
  bool first = true;
  for (std::size_t i = 0; i < red.basis.size(); ++i) {
    Q c = sup_norm(red.basis[i]);
    if (first || c < best.c) {
      best = {red.basis[i], red.transform[i], c};
      first = false;
    }
  }
  Q dim = l.ambient;
  enumerate_lattice(
      l, [&]() -> Q { return dim * best.c * best.c; },
      [&](const Vec& v, const ZVec& x) {
        Q c = sup_norm(v);
        if (c < best.c) best = {v, x, c};
      });
  return best;
}

XEtaResult x_eta_lattice(const LatticeBasis& l, const Q& eta) {
  require(eta > 0, "eta must be positive");
  XEtaResult res;
  Q bound = eta;
  Q dim = l.ambient;
  enumerate_lattice(
      l, [&]() -> Q { return dim * bound * bound; },
      [&](const Vec& v, const ZVec& x) {
        Q c = sup_norm(v);
        if (c < bound) {
          res.in = false;
          res.witness = ShortVector{v, x, c};
          bound = c;
        }
      });
  return res;
}

XEtaResult x_eta_test(const Mat& g, const Q& eta, const MatrixLieAlgebra& ambient) {
  return x_eta_lattice(adjoint_lattice(g, ambient), eta);
}

Q group_size(const Mat& g) { return std::max(sup_norm(g), sup_norm(inverse(g))); }

Reduction reduce_representative(const Mat& g) {
  int n = static_cast<int>(g.size());
  require(n >= 1 && static_cast<int>(g[0].size()) == n, "reduce_representative needs a square matrix");
  require(det(g) != 0, "reduce_representative needs an invertible matrix");
  auto red = lll(transpose(g));
  Mat gamma = zeros(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gamma[j][i] = Q(red.transform[i][j]);
  if (det(gamma) < 0)
    for (int j = 0; j < n; ++j) gamma[j][n - 1] = -gamma[j][n - 1];
  Reduction r;
  r.size_before = group_size(g);
  Mat gg = mul(g, gamma);
  Q after = group_size(gg);
  if (after < r.size_before) {
    r.gamma = gamma;
    r.reduced = gg;
    r.size_after = after;
  } else {
    r.gamma = identity(n);
    r.reduced = g;
    r.size_after = r.size_before;
  }
  return r;
}

namespace {

Q qpow(const Q& x, long e) {
  Q r = 1;
  Q b = e >= 0 ? x : Q(1) / x;
  for (long i = 0; i < std::labs(e); ++i) r *= b;
  return r;
}

}  // namespace

bool reduction_bound_holds(const Reduction& r, const Q& eta, const ConstantsProfile& k) {
  require(eta > 0, "eta must be positive");
  return r.size_after * qpow(eta, k.F) <= k.EG;
}

Submodule submodule(const LatticeBasis& l, const std::vector<ZVec>& coeffs) {
  Submodule s;
  s.rank = static_cast<int>(coeffs.size());
  s.coeffs = coeffs;
  for (const auto& x : coeffs) s.vectors.push_back(l.combine(x));
  if (s.rank == 0) {
    s.w = ext_unit(l.ambient);
    s.c = 1;
    return s;
  }
  s.w = wedge(s.vectors, l.ambient);
  if (s.w.is_zero()) fail(Errc::DependentBasis, "submodule generators are dependent");
  s.c = sup_norm(s.w);
  return s;
}

namespace {

std::vector<ZVec> to_z(const std::vector<Vec>& rows) {
  std::vector<ZVec> out;
  for (const auto& r : rows) {
    ZVec z;
    for (const auto& x : r) {
      require(x.get_den() == 1, "expected integral coefficients");
      z.push_back(x.get_num());
    }
    out.push_back(z);
  }
  return out;
}

std::vector<Vec> to_q(const std::vector<ZVec>& rows) {
  std::vector<Vec> out;
  for (const auto& r : rows) {
    Vec v;
    for (const auto& x : r) v.emplace_back(x);
    out.push_back(v);
  }
  return out;
}

}  // namespace

Submodule primitive_submodule(const LatticeBasis& l, const std::vector<ZVec>& coeffs) {
  if (coeffs.empty()) return submodule(l, {});
  auto rows = span_basis(to_q(coeffs));
  return submodule(l, to_z(saturate(rows)));
}

bool contained(const Submodule& a, const Submodule& b) {
  if (a.rank == 0) return true;
  if (b.rank == 0) return false;
  return subspace_of(a.vectors, b.vectors);
}

namespace {

struct ExtLattice {
  LatticeBasis lat;
  std::vector<std::vector<int>> subsets;
  int degree;
};

ExtLattice ext_lattice(const LatticeBasis& l, int i) {
  ExtLattice e;
  e.degree = i;
  e.subsets = multi_indices(l.rank(), i);
  std::vector<Vec> vs;
  for (const auto& s : e.subsets) {
    std::vector<Vec> bs;
    for (int j : s) bs.push_back(l.vectors[j]);
    vs.push_back(ext_coords(wedge(bs, l.ambient)));
  }
  e.lat = make_lattice(vs);
  return e;
}

// Primitive submodule of l whose top wedge is proportional to w.
Submodule module_of_wedge(const LatticeBasis& l, const ExteriorVector& w) {
  std::vector<Vec> cols;
  for (const auto& b : l.vectors) cols.push_back(ext_coords(wedge(b, w)));
  auto ker = nullspace(transpose(cols), l.rank());
  return submodule(l, to_z(saturate(ker)));
}

Z content(const ZVec& y) {
  Z g = 0;
  for (const auto& x : y) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

}  // namespace

std::vector<Submodule> primitive_submodules_below(const LatticeBasis& l, int i, const Q& bound, bool inclusive,
                                                  long cap) {
  require(i >= 1 && i <= l.rank(), "submodule rank out of range");
  auto ok = [&](const Q& c) { return inclusive ? c <= bound : c < bound; };
  std::vector<Submodule> out;
  if (i == l.rank()) {
    std::vector<ZVec> id;
    for (int j = 0; j < l.rank(); ++j) {
      ZVec x(l.rank(), Z(0));
      x[j] = 1;
      id.push_back(x);
    }
    auto s = submodule(l, id);
    if (ok(s.c)) out.push_back(s);
    return out;
  }
  auto e = ext_lattice(l, i);
  Q dim = e.lat.ambient;
  long count = 0;
  enumerate_lattice(
      e.lat, [&]() -> Q { return dim * bound * bound; },
      [&](const Vec& v, const ZVec& y) {
        Q c = sup_norm(v);
        if (!ok(c) || content(y) != 1) return;
        ExteriorVector w = ext_from_coords(v, l.ambient, i);
        if (annihilator_dim(w) != i) return;
        if (++count > cap) fail(Errc::ResolutionNotReached, "too many primitive submodules below the bound");
        out.push_back(module_of_wedge(l, w));
      });
  std::sort(out.begin(), out.end(), [](const Submodule& a, const Submodule& b) {
    if (a.c != b.c) return a.c < b.c;
    return canonical_sign(a.w).comp < canonical_sign(b.w).comp;
  });
  return out;
}

AlphaResult alpha_i(const LatticeBasis& l, int i) {
  require(i >= 1 && i <= l.rank(), "alpha_i: rank out of range");
  auto red = lll(l.vectors);
  std::vector<ZVec> first(red.transform.begin(), red.transform.begin() + i);
  AlphaResult res;
  res.witness = submodule(l, first);
  if (i < l.rank()) {
    auto e = ext_lattice(l, i);
    Q dim = e.lat.ambient;
    std::optional<ExteriorVector> best_w;
    Q best = res.witness.c;
    enumerate_lattice(
        e.lat, [&]() -> Q { return dim * best * best; },
        [&](const Vec& v, const ZVec& y) {
          Q c = sup_norm(v);
          if (c >= best || content(y) != 1) return;
          ExteriorVector w = ext_from_coords(v, l.ambient, i);
          if (annihilator_dim(w) != i) return;
          best = c;
          best_w = w;
        });
    if (best_w) res.witness = module_of_wedge(l, *best_w);
  }
  res.c_min = res.witness.c;
  res.alpha = 1 / res.c_min;
  return res;
}

Mat MatPoly::at(const Q& t) const {
  require(!coeffs.empty(), "empty matrix polynomial");
  Mat r = coeffs.back();
  for (std::size_t m = coeffs.size() - 1; m-- > 0;) r = add(scale(r, t), coeffs[m]);
  return r;
}

MatPoly exp_nilpotent(const Mat& z) {
  int n = static_cast<int>(z.size());
  MatPoly p;
  Mat term = identity(n);
  Q fact = 1;
  for (int m = 0; m <= n; ++m) {
    if (is_zero(term)) break;
    require(m < n, "exp_nilpotent: matrix is not nilpotent");
    p.coeffs.push_back(scale(term, 1 / fact));
    term = mul(term, z);
    fact *= m + 1;
  }
  return p;
}

MatPoly rescale(const MatPoly& p, const Q& s) {
  MatPoly out = p;
  Q f = 1;
  for (auto& c : out.coeffs) {
    c = scale(c, f);
    f *= s;
  }
  return out;
}

std::vector<Q> chebyshev_grid(int degree, int factor) {
  std::vector<Q> g{Q(-1), Q(0), Q(1)};
  int m = std::max(1, factor * degree);
  const double scale2 = 16777216.0;  // 2^24
  for (int j = 0; j < m; ++j) {
    double x = std::cos((2.0 * j + 1.0) * M_PI / (2.0 * m));
    Q q(static_cast<long>(std::llround(x * scale2)), 16777216L);
    q.canonicalize();
    g.push_back(q);
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

double grid_certificate(int degree, int factor) {
  if (degree == 0) return 1.0;
  double den = std::cos(M_PI / (2.0 * factor)) - static_cast<double>(degree) * degree * std::ldexp(1.0, -25);
  require(den > 0, "grid too coarse for a certificate");
  return 1.0 / den;
}

long double FlagProfile::log_eta(int i) const {
  require(i >= 0 && i <= N, "rank out of range");
  std::vector<int> ks{0};
  std::vector<long double> ys{0};
  for (std::size_t j = 0; j < ranks.size(); ++j) ks.push_back(ranks[j]), ys.push_back(log_abs(eta[j]));
  ks.push_back(N);
  ys.push_back(log_abs(eta_top));
  for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
    if (i >= ks[j] && i <= ks[j + 1]) {
      long double t = static_cast<long double>(i - ks[j]) / (ks[j + 1] - ks[j]);
      return ys[j] + t * (ys[j + 1] - ys[j]);
    }
  }
  return ys.back();
}

namespace {

// b strictly above the chord from a to c in the (rank, −log η) plane.
bool strictly_above(int ka, const Q& ea, int kb, const Q& eb, int kc, const Q& ec) {
  return qpow(eb, kc - ka) < qpow(ea, kc - kb) * qpow(ec, kb - ka);
}

bool not_below(int ka, const Q& ea, int kb, const Q& eb, int kc, const Q& ec) {
  return qpow(eb, kc - ka) <= qpow(ea, kc - kb) * qpow(ec, kb - ka);
}

Q eta_over_grid(const std::vector<Mat>& ms, const ExteriorVector& w) {
  Q best = 0;
  for (const auto& m : ms) best = std::max(best, sup_norm(ext_apply(m, w)));
  return best;
}

}  // namespace

FlagProfile flag_construct(const LatticeBasis& l, const MatPoly& action, const FlagParams& p) {
  require(action.size() == l.ambient, "action size does not match the lattice ambient dimension");
  FlagProfile f;
  f.N = l.rank();
  int deg = f.N * std::max(0, action.degree());
  f.grid = chebyshev_grid(deg, p.grid_factor);
  f.certificate = grid_certificate(deg, p.grid_factor);
  std::vector<Mat> ms;
  for (const auto& t : f.grid) ms.push_back(action.at(t));
  LatticeBasis l0 = transform_lattice(action.at(Q(0)), l);

  {
    std::vector<Vec> all = l.vectors;
    f.eta_top = eta_over_grid(ms, wedge(all, l.ambient));
  }

  // Candidates per rank, sorted by η.
  std::vector<std::vector<FlagCandidate>> pool(f.N);
  for (int i = 1; i < f.N; ++i) {
    auto subs = primitive_submodules_below(l0, i, Q(1), false, p.candidate_cap);
    f.candidates += static_cast<long>(subs.size());
    for (const auto& s0 : subs) {
      Submodule s = submodule(l, s0.coeffs);
      Q eta = eta_over_grid(ms, s.w);
      if (eta >= 1) continue;
      pool[i].push_back({s, eta, to_double(eta) * f.certificate});
    }
    std::stable_sort(pool[i].begin(), pool[i].end(),
                     [](const FlagCandidate& a, const FlagCandidate& b) { return a.eta < b.eta; });
  }
  std::vector<std::size_t> pick(f.N, 0);

  while (true) {
    struct Pt {
      int k;
      Q eta;
    };
    std::vector<Pt> pts{{0, Q(1)}};
    for (int i = 1; i < f.N; ++i)
      if (pick[i] < pool[i].size()) pts.push_back({i, pool[i][pick[i]].eta});
    pts.push_back({f.N, f.eta_top});
    std::vector<Pt> hull;
    for (const auto& pt : pts) {
      while (hull.size() >= 2) {
        const auto& a = hull[hull.size() - 2];
        const auto& b = hull.back();
        if (strictly_above(a.k, a.eta, b.k, b.eta, pt.k, pt.eta)) break;
        hull.pop_back();
      }
      hull.push_back(pt);
    }
    std::vector<int> ks;
    for (const auto& h : hull)
      if (h.k > 0 && h.k < f.N) ks.push_back(h.k);
    int bad = -1;
    for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
      const auto& lo = pool[ks[j]][pick[ks[j]]];
      const auto& hi = pool[ks[j + 1]][pick[ks[j + 1]]];
      if (!contained(lo.sub, hi.sub)) {
        bad = lo.eta > hi.eta ? ks[j] : ks[j + 1];
        break;
      }
    }
    if (bad >= 0) {
      ++pick[bad];
      continue;
    }
    f.ranks = ks;
    for (int k : ks) {
      f.modules.push_back(pool[k][pick[k]].sub);
      f.eta.push_back(pool[k][pick[k]].eta);
    }
    for (int i = 1; i < f.N; ++i)
      if (pick[i] < pool[i].size()) f.best.push_back(pool[i][pick[i]]);
    break;
  }
  return f;
}

bool flag_concave(const FlagProfile& f) {
  std::vector<int> ks{0};
  std::vector<Q> es{Q(1)};
  for (std::size_t j = 0; j < f.ranks.size(); ++j) ks.push_back(f.ranks[j]), es.push_back(f.eta[j]);
  ks.push_back(f.N);
  es.push_back(f.eta_top);
  for (std::size_t j = 0; j + 1 < ks.size(); ++j)
    if (ks[j] >= ks[j + 1]) return false;
  for (std::size_t j = 1; j + 1 < ks.size(); ++j)
    if (!not_below(ks[j - 1], es[j - 1], ks[j], es[j], ks[j + 1], es[j + 1])) return false;
  for (std::size_t j = 0; j + 1 < f.modules.size(); ++j)
    if (!contained(f.modules[j], f.modules[j + 1])) return false;
  return true;
}

ObstructionResult detect_unipotent_obstruction(const FlagProfile& f, const LatticeBasis& l,
                                               const MatrixLieAlgebra& ambient, const Q& rho, const Q& kappa_prime) {
  ObstructionResult res;
  require(rho > 0, "rho must be positive");
  require(l.frame.size() == l.vectors.size(), "lattice has no integral frame; build it with adjoint_lattice");
  if (rho > kappa_prime) {
    res.diagnostic = "rho exceeds kappa_prime";
    return res;
  }
  if (f.ranks.empty()) {
    res.diagnostic = "empty flag";
    return res;
  }
  std::size_t ri = 0;
  while (ri < f.ranks.size() && f.eta[ri] > rho) ++ri;
  if (ri == f.ranks.size()) {
    res.diagnostic = "no flag rank with eta below rho";
    return res;
  }
  res.r = f.ranks[ri];
  // Largest vertex k_j such that every segment up to it has per-rank ratio at most rho^(1/r).
  int prev_k = 0;
  Q prev_eta = 1;
  int chosen = -1;
  for (std::size_t j = 0; j < f.ranks.size(); ++j) {
    Q ratio = f.eta[j] / prev_eta;
    if (qpow(ratio, res.r) <= qpow(rho, f.ranks[j] - prev_k)) {
      chosen = static_cast<int>(j);
      prev_k = f.ranks[j];
      prev_eta = f.eta[j];
    } else {
      break;
    }
  }
  if (chosen < 0) {
    res.diagnostic = "slope rule selects no vertex";
    return res;
  }
  res.k = f.ranks[chosen];
  res.eta_k = f.eta[chosen];
  res.bound_ok = qpow(res.eta_k, res.r) <= qpow(rho, res.k);

  const Submodule& d = f.modules[chosen];
  std::vector<Vec> basis;
  for (const auto& x : d.coeffs) {
    Vec z(l.frame[0].size());
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] != 0) z = add(z, scale(l.frame[j], Q(x[j])));
    basis.push_back(z);
  }
  MatrixLieAlgebra w;
  try {
    w = make_algebra(ambient.n, basis);
  } catch (const Error& e) {
    res.diagnostic = std::string("candidate subspace is not a subalgebra: ") + e.what();
    return res;
  }
  for (const auto& z : w.basis) {
    auto cert = is_nilpotent_element(sl_matrix(z, ambient.n));
    if (!cert.nilpotent) {
      res.sigma_bar = cert.sigma_bar;
      res.diagnostic = "candidate subspace contains a non-nilpotent element, sigma_bar = " + to_string(cert.sigma_bar);
      return res;
    }
  }
  auto rad = radical_and_unipotent_radical(w);
  if (rad.radical.dim() != w.dim() || rad.unipotent_radical.dim() != w.dim()) {
    res.diagnostic = "candidate subalgebra is not unipotent";
    return res;
  }
  res.W = describe(w, ambient, "W");
  res.found = true;
  return res;
}

CompletedFlag minkowski_complete(const FlagProfile& f, const LatticeBasis& l, const Mat& action_at_u, const Q& A) {
  LatticeBasis lu = transform_lattice(action_at_u, l);
  int N = l.rank();
  std::vector<ZVec> id;
  for (int j = 0; j < N; ++j) {
    ZVec x(N, Z(0));
    x[j] = 1;
    id.push_back(x);
  }
  std::vector<std::vector<ZVec>> chain{{}};
  for (const auto& m : f.modules) chain.push_back(m.coeffs);
  chain.push_back(id);

  CompletedFlag out;
  out.modules.resize(N);
  out.c.resize(N);
  for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
    const auto& lo = chain[s];
    const auto& hi = chain[s + 1];
    int klo = static_cast<int>(lo.size()), khi = static_cast<int>(hi.size());
    std::vector<Vec> lov;
    for (const auto& x : lo) lov.push_back(lu.combine(x));
    Gso g = gso(lov);
    std::vector<Vec> bstar;
    for (std::size_t i = 0; i < lov.size(); ++i) {
      Vec b = lov[i];
      for (std::size_t j = 0; j < i; ++j) b = sub(b, scale(bstar[j], g.mu[i][j]));
      bstar.push_back(b);
    }
    std::vector<Vec> proj;
    for (const auto& x : hi) {
      Vec v = lu.combine(x);
      for (std::size_t j = 0; j < bstar.size(); ++j) v = sub(v, scale(bstar[j], dot(v, bstar[j]) / g.B[j]));
      proj.push_back(v);
    }
    auto red = lll(proj);
    if (static_cast<int>(red.basis.size()) != khi - klo)
      fail(Errc::Internal, "flag completion produced a basis of the wrong rank");
    std::vector<ZVec> rows = lo;
    Submodule lo_mod = submodule(lu, lo);
    Submodule hi_mod = submodule(lu, hi);
    for (int m = 0; m < khi - klo; ++m) {
      ZVec lift(N, Z(0));
      for (std::size_t j = 0; j < hi.size(); ++j)
        for (int t = 0; t < N; ++t) lift[t] += red.transform[m][j] * hi[j][t];
      rows.push_back(lift);
      int r = klo + m + 1;
      Submodule s = submodule(lu, rows);
      out.modules[r - 1] = s;
      out.c[r - 1] = s.c;
      if (r == khi) continue;
      Q lhs = qpow(s.c, khi - klo);
      Q rhs = qpow(lo_mod.c, khi - r) * qpow(hi_mod.c, r - klo);
      double a = std::exp(static_cast<double>((log_abs(lhs) - log_abs(rhs)) / (khi - klo)));
      out.measured_A = std::max(out.measured_A, a);
      if (lhs > qpow(A, khi - klo) * rhs) out.within_A = false;
    }
  }
  return out;
}

SumIntersection sum_intersection(const LatticeBasis& l, const Submodule& a, const Submodule& b) {
  SumIntersection r;
  r.c1 = a.c;
  r.c2 = b.c;
  auto inter = intersect(to_q(a.coeffs), to_q(b.coeffs));
  Submodule si = inter.empty() ? submodule(l, {}) : submodule(l, to_z(saturate(inter)));
  std::vector<ZVec> gens = a.coeffs;
  gens.insert(gens.end(), b.coeffs.begin(), b.coeffs.end());
  auto h = hnf_rows(gens, l.rank());
  Submodule ss = submodule(l, h);
  r.c_int = si.c;
  r.c_sum = ss.c;
  r.ratio = std::exp(static_cast<double>(log_abs(si.c) + log_abs(ss.c) - log_abs(a.c) - log_abs(b.c)));
  return r;
}

ExceptionalFit exceptional_fit(const FlagProfile& f, const LatticeBasis& l, const MatPoly& action,
                               const std::vector<Q>& samples, const std::vector<Q>& eps) {
  require(!samples.empty() && !eps.empty(), "exceptional_fit needs samples and epsilon values");
  ExceptionalFit fit;
  fit.eps = eps;
  int N = l.rank();
  std::vector<std::vector<long double>> logm(samples.size(), std::vector<long double>(N));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    LatticeBasis lt = transform_lattice(action.at(samples[s]), l);
    for (int i = 1; i < N; ++i) logm[s][i] = log_abs(alpha_i(lt, i).c_min);
  }
  std::vector<long double> loge(N);
  for (int i = 1; i < N; ++i) loge[i] = f.log_eta(i);
  std::vector<double> xs, ys;
  for (const auto& e : eps) {
    require(e > 0 && e <= 1, "epsilon values must lie in (0, 1]");
    long double le = log_abs(e);
    long bad = 0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      bool hit = false;
      for (int i = 1; i < N && !hit; ++i) hit = logm[s][i] < i * le + loge[i];
      bad += hit;
    }
    double frac = static_cast<double>(bad) / static_cast<double>(samples.size());
    fit.fraction.push_back(frac);
    xs.push_back(static_cast<double>(le));
  }
  // A zero fraction only says the true fraction is below the sampling resolution 1/n, so it enters the
  // fit at that floor; this can only understate the decay.
  double floor_frac = 1.0 / static_cast<double>(samples.size());
  bool any = false;
  for (double fr : fit.fraction) {
    any = any || fr > 0;
    ys.push_back(std::log(fr > 0 ? fr : floor_frac));
  }
  if (!any) {
    fit.all_zero = true;
    fit.exponent = std::numeric_limits<double>::infinity();
  } else if (xs.size() == 1) {
    fit.exponent = 0;
  } else {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) num += (xs[i] - mx) * (ys[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
    fit.exponent = den > 0 ? num / den : 0;
  }
  return fit;
}

}  // namespace unilin
