#include "unilin/lie.hpp"

#include <deque>

namespace unilin {

int sl_dim(int n) { return n * n - 1; }

namespace {

struct SlIndex {
  int n;
  std::vector<std::pair<int, int>> off;  // (i, j) for coordinates n-1 ..

  explicit SlIndex(int n_) : n(n_) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off.emplace_back(i, j);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) off.emplace_back(i, j);
  }
};

const SlIndex& sl_index(int n) {
  static thread_local std::deque<SlIndex> cache;
  for (const auto& s : cache)
    if (s.n == n) return s;
  cache.emplace_back(n);
  return cache.back();
}

}  // namespace

Mat sl_matrix(const Vec& c, int n) {
  require(static_cast<int>(c.size()) == sl_dim(n), "sl coordinate vector has wrong length");
  Mat m = zeros(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    m[i][i] += c[i];
    m[i + 1][i + 1] -= c[i];
  }
  const auto& idx = sl_index(n);
  for (std::size_t k = 0; k < idx.off.size(); ++k) m[idx.off[k].first][idx.off[k].second] = c[n - 1 + k];
  return m;
}

Vec sl_coords(const Mat& m) {
  int n = static_cast<int>(m.size());
  require(n >= 2, "sl_N needs N >= 2");
  require(trace(m) == 0, "matrix is not traceless");
  Vec c(sl_dim(n));
  Q run = 0;
  for (int i = 0; i + 1 < n; ++i) {
    run += m[i][i];
    c[i] = run;
  }
  const auto& idx = sl_index(n);
  for (std::size_t k = 0; k < idx.off.size(); ++k) c[n - 1 + k] = m[idx.off[k].first][idx.off[k].second];
  return c;
}

Vec sl_basis_vector(int n, int j) {
  Vec e(sl_dim(n));
  e[j] = 1;
  return e;
}

Mat elementary(int n, int i, int j) {
  Mat m = zeros(n, n);
  m[i][j] = 1;
  return m;
}

Mat mat_bracket(const Mat& a, const Mat& b) { return sub(mul(a, b), mul(b, a)); }

Vec bracket(const Vec& z, const Vec& w, int n) {
  return sl_coords(mat_bracket(sl_matrix(z, n), sl_matrix(w, n)));
}

Mat adjoint(const Mat& g) {
  int n = static_cast<int>(g.size());
  Mat gi = inverse(g);
  int d = sl_dim(n);
  Mat ad = zeros(d, d);
  auto outer = [&](int a, int b) {
    Mat m = zeros(n, n);
    for (int i = 0; i < n; ++i) {
      if (g[i][a] == 0) continue;
      for (int j = 0; j < n; ++j)
        if (gi[b][j] != 0) m[i][j] = g[i][a] * gi[b][j];
    }
    return m;
  };
  for (int j = 0; j < d; ++j) {
    Mat img;
    if (j < n - 1)
      img = sub(outer(j, j), outer(j + 1, j + 1));
    else {
      auto [a, b] = sl_index(n).off[j - (n - 1)];
      img = outer(a, b);
    }
    Vec c = sl_coords(img);
    for (int i = 0; i < d; ++i) ad[i][j] = c[i];
  }
  return ad;
}

MatrixLieAlgebra make_algebra(int n, const std::vector<Vec>& basis) {
  require(n >= 2, "ambient sl_N needs N >= 2");
  for (const auto& b : basis) require(static_cast<int>(b.size()) == sl_dim(n), "basis vector has wrong length");
  SpanCoords sc(basis);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!sc.contains(bracket(basis[i], basis[j], n)))
        fail(Errc::NotClosed, "subspace is not closed under the bracket");
  return MatrixLieAlgebra{n, basis};
}

MatrixLieAlgebra make_algebra_from_matrices(const std::vector<Mat>& mats) {
  require(!mats.empty(), "empty matrix list");
  int n = static_cast<int>(mats[0].size());
  std::vector<Vec> b;
  for (const auto& m : mats) {
    require(static_cast<int>(m.size()) == n, "matrices of different sizes");
    b.push_back(sl_coords(m));
  }
  return make_algebra(n, b);
}

MatrixLieAlgebra integral_basis(const MatrixLieAlgebra& a) {
  if (a.basis.empty()) return a;
  return MatrixLieAlgebra{a.n, saturate(a.basis)};
}

MatrixLieAlgebra generated_algebra(int n, const std::vector<Vec>& gens) {
  std::vector<Vec> span = span_basis(gens);
  while (true) {
    std::vector<Vec> next = span;
    for (std::size_t i = 0; i < span.size(); ++i)
      for (std::size_t j = i + 1; j < span.size(); ++j) next.push_back(bracket(span[i], span[j], n));
    next = span_basis(next);
    if (next.size() == span.size()) break;
    span = next;
  }
  return integral_basis(MatrixLieAlgebra{n, span});
}

MatrixLieAlgebra full_sl(int n) {
  std::vector<Vec> b;
  for (int j = 0; j < sl_dim(n); ++j) b.push_back(sl_basis_vector(n, j));
  return MatrixLieAlgebra{n, b};
}

MatrixLieAlgebra zero_algebra(int n) { return MatrixLieAlgebra{n, {}}; }

bool same_algebra(const MatrixLieAlgebra& a, const MatrixLieAlgebra& b) {
  return a.n == b.n && a.dim() == b.dim() && same_span(a.basis, b.basis);
}

bool contains(const MatrixLieAlgebra& a, const Vec& z) { return in_span(a.basis, z); }

Mat ad_in(const MatrixLieAlgebra& l, const Vec& z) {
  SpanCoords sc(l.basis);
  int d = l.dim();
  Mat m = zeros(d, d);
  for (int j = 0; j < d; ++j) {
    Vec c = sc.coords(bracket(z, l.basis[j], l.n));
    for (int i = 0; i < d; ++i) m[i][j] = c[i];
  }
  return m;
}

Mat killing_matrix(const MatrixLieAlgebra& l) {
  int d = l.dim();
  std::vector<Mat> ads;
  for (const auto& b : l.basis) ads.push_back(ad_in(l, b));
  Mat k = zeros(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      k[i][j] = trace(mul(ads[i], ads[j]));
      k[j][i] = k[i][j];
    }
  return k;
}

std::vector<Vec> derived_subspace(const MatrixLieAlgebra& l, const std::vector<Vec>& a,
                                  const std::vector<Vec>& b) {
  std::vector<Vec> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Vec z = bracket(x, y, l.n);
      if (!is_zero(z)) out.push_back(z);
    }
  return span_basis(out);
}

MatrixLieAlgebra derived_algebra(const MatrixLieAlgebra& l) {
  return integral_basis(MatrixLieAlgebra{l.n, derived_subspace(l, l.basis, l.basis)});
}

namespace {

std::vector<Vec> combine(const std::vector<Vec>& basis, const std::vector<Vec>& coeffs, int amb) {
  std::vector<Vec> out;
  for (const auto& x : coeffs) {
    Vec v(amb);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (x[i] != 0) v = add(v, scale(basis[i], x[i]));
    out.push_back(v);
  }
  return out;
}

Vec flatten(const Mat& m) {
  Vec v;
  for (const auto& r : m) v.insert(v.end(), r.begin(), r.end());
  return v;
}

Mat unflatten(const Vec& v, int n) {
  Mat m(n, Vec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = v[i * n + j];
  return m;
}

MatrixLieAlgebra radical_of(const MatrixLieAlgebra& l) {
  int d = l.dim();
  if (d == 0) return l;
  Mat k = killing_matrix(l);
  SpanCoords sc(l.basis);
  Mat eqs;
  for (const auto& dv : derived_subspace(l, l.basis, l.basis)) {
    Vec y = sc.coords(dv);
    eqs.push_back(mul(k, y));
  }
  std::vector<Vec> xs = eqs.empty() ? nullspace(zeros(1, d), d) : nullspace(eqs, d);
  return integral_basis(MatrixLieAlgebra{l.n, span_basis(combine(l.basis, xs, l.ambient_dim()))});
}

MatrixLieAlgebra unipotent_radical_of_solvable(const MatrixLieAlgebra& r) {
  int n = r.n, d = r.dim();
  if (d == 0) return r;
  std::vector<Mat> rm;
  for (const auto& b : r.basis) rm.push_back(sl_matrix(b, n));
  std::vector<Vec> words;
  for (const auto& m : rm) words.push_back(flatten(m));
  words = span_basis(words);
  for (int s = 2; s <= n; ++s) {
    std::vector<Vec> next = words;
    for (const auto& w : words) {
      Mat wm = unflatten(w, n);
      for (const auto& m : rm) next.push_back(flatten(mul(wm, m)));
    }
    next = span_basis(next);
    if (next.size() == words.size()) break;
    words = next;
  }
  Mat eqs;
  for (const auto& w : words) {
    Mat wm = unflatten(w, n);
    Vec row(d);
    for (int i = 0; i < d; ++i) row[i] = trace(mul(wm, rm[i]));
    eqs.push_back(row);
  }
  std::vector<Vec> xs = nullspace(eqs, d);
  auto span = span_basis(combine(r.basis, xs, r.ambient_dim()));
  return integral_basis(MatrixLieAlgebra{n, span});
}

}  // namespace

Radicals radical_and_unipotent_radical(const MatrixLieAlgebra& l) {
  Radicals out;
  out.radical = radical_of(l);
  out.unipotent_radical = unipotent_radical_of_solvable(out.radical);
  return out;
}

MatrixLieAlgebra class_h_closure(const MatrixLieAlgebra& l) {
  auto d = derived_subspace(l, l.basis, l.basis);
  auto ru = radical_and_unipotent_radical(l).unipotent_radical;
  d.insert(d.end(), ru.basis.begin(), ru.basis.end());
  auto span = span_basis(d);
  if (span.empty()) return zero_algebra(l.n);
  return integral_basis(MatrixLieAlgebra{l.n, span});
}

bool is_class_h(const MatrixLieAlgebra& l) {
  auto r = radical_and_unipotent_radical(l);
  return r.radical.dim() == r.unipotent_radical.dim();
}

NilpotencyCertificate is_nilpotent_element(const Mat& w) {
  int n = static_cast<int>(w.size());
  Mat p = identity(n);
  for (int i = 0; i < n; ++i) p = mul(p, w);
  NilpotencyCertificate out;
  out.nilpotent = is_zero(p);
  auto c = char_poly(w);
  for (int i = 0; i < n; ++i)
    if (c[i] != 0) {
      out.sigma_bar = c[i];
      break;
    }
  return out;
}

MatrixLieAlgebra normalizer(const MatrixLieAlgebra& g, const MatrixLieAlgebra& u) {
  int amb = g.ambient_dim(), d = g.dim();
  auto ann = annihilator(u.basis, amb);
  if (ann.empty()) return g;
  Mat eqs;
  std::vector<std::vector<Vec>> br(d);
  for (int j = 0; j < d; ++j)
    for (const auto& ui : u.basis) br[j].push_back(bracket(g.basis[j], ui, g.n));
  for (std::size_t i = 0; i < u.basis.size(); ++i)
    for (const auto& a : ann) {
      Vec row(d);
      for (int j = 0; j < d; ++j) row[j] = dot(a, br[j][i]);
      if (!is_zero(row)) eqs.push_back(row);
    }
  std::vector<Vec> xs = eqs.empty() ? nullspace(zeros(1, d), d) : nullspace(eqs, d);
  auto span = span_basis(combine(g.basis, xs, amb));
  if (span.empty()) return zero_algebra(g.n);
  return integral_basis(MatrixLieAlgebra{g.n, span});
}

bool is_ideal(const MatrixLieAlgebra& g, const MatrixLieAlgebra& h) {
  SpanCoords sc(h.basis);
  for (const auto& x : g.basis)
    for (const auto& y : h.basis)
      if (!sc.contains(bracket(x, y, g.n))) return false;
  return true;
}

ParabolicTrace parabolic_from_nilpotent(const MatrixLieAlgebra& g, const std::vector<Vec>& w) {
  require(!w.empty(), "parabolic_from_nilpotent: empty generator list");
  for (const auto& z : w) {
    require(contains(g, z), "generator outside the ambient algebra");
    if (!is_nilpotent_element(sl_matrix(z, g.n)).nilpotent)
      fail(Errc::NotNilpotent, "generator is not a nilpotent element");
  }
  ParabolicTrace out;
  MatrixLieAlgebra u = generated_algebra(g.n, w);
  auto rad = radical_and_unipotent_radical(u);
  if (rad.unipotent_radical.dim() != u.dim())
    fail(Errc::NotNilpotent, "generated algebra contains non-nilpotent elements");
  out.chain.push_back(u);
  for (int step = 0; step <= g.dim(); ++step) {
    MatrixLieAlgebra next = radical_and_unipotent_radical(normalizer(g, u)).unipotent_radical;
    if (same_algebra(next, u)) break;
    u = next;
    out.chain.push_back(u);
  }
  out.parabolic = normalizer(g, u);
  return out;
}

CentralSeries lower_central_series(const MatrixLieAlgebra& u) {
  CentralSeries out;
  if (u.dim() == 0) return out;
  MatrixLieAlgebra cur = integral_basis(u);
  while (true) {
    out.chain.push_back(cur);
    auto next = derived_subspace(u, u.basis, cur.basis);
    if (static_cast<int>(next.size()) == cur.dim())
      fail(Errc::NotNilpotentAlgebra, "lower central series does not reach zero");
    std::vector<Vec> grade, acc = next;
    for (const auto& b : cur.basis) {
      if (in_span(acc, b)) continue;
      acc.push_back(b);
      grade.push_back(b);
    }
    out.grades.push_back(grade);
    if (next.empty()) break;
    cur = integral_basis(MatrixLieAlgebra{u.n, next});
  }
  return out;
}

}  // namespace unilin
