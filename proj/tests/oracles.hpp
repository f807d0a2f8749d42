#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "unilin/lie.hpp"

namespace th {

using namespace unilin;

namespace oracle_detail {
inline Vec E(int n, int i, int j) { return sl_coords(elementary(n, i, j)); }
inline Vec Hd(int n, std::initializer_list<long> d) {
  Mat m = zeros(n, n);
  int i = 0;
  for (long x : d) m[i][i] = x, ++i;
  return sl_coords(m);
}
inline MatrixLieAlgebra alg(int n, std::vector<Vec> b) { return make_algebra(n, b); }
}  // namespace oracle_detail

// Independent class-H oracle: L = L^(inf) + {x in L : tr(x a) = 0 for a in the associative envelope}.
inline bool oracle_class_h(const MatrixLieAlgebra& l) {
  int n = l.n;
  std::vector<Vec> d = l.basis;
  while (true) {
    std::vector<Vec> nd;
    for (const auto& x : d)
      for (const auto& y : d) nd.push_back(bracket(x, y, n));
    nd = span_basis(nd);
    if (nd.size() == d.size()) break;
    d = nd;
  }
  std::vector<Mat> lm;
  for (const auto& b : l.basis) lm.push_back(sl_matrix(b, n));
  std::vector<Vec> env;
  auto flat = [&](const Mat& m) {
    Vec v;
    for (const auto& r : m) v.insert(v.end(), r.begin(), r.end());
    return v;
  };
  for (const auto& m : lm) env.push_back(flat(m));
  env = span_basis(env);
  while (true) {
    std::vector<Vec> ne = env;
    for (const auto& w : env) {
      Mat wm(n, Vec(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) wm[i][j] = w[i * n + j];
      for (const auto& m : lm) ne.push_back(flat(mul(wm, m)));
    }
    ne = span_basis(ne);
    if (ne.size() == env.size()) break;
    env = ne;
  }
  Mat eqs;
  for (const auto& w : env) {
    Mat wm(n, Vec(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) wm[i][j] = w[i * n + j];
    Vec row;
    for (const auto& m : lm) row.push_back(trace(mul(wm, m)));
    eqs.push_back(row);
  }
  auto xs = nullspace(eqs, l.dim());
  std::vector<Vec> sum = d;
  for (const auto& x : xs) {
    Vec v(l.ambient_dim());
    for (int i = 0; i < l.dim(); ++i) v = add(v, scale(l.basis[i], x[i]));
    sum.push_back(v);
  }
  return rank(sum) == l.dim();
}

inline bool solvable(const MatrixLieAlgebra& l) {
  std::vector<Vec> d = l.basis;
  while (!d.empty()) {
    std::vector<Vec> nd;
    for (const auto& x : d)
      for (const auto& y : d) nd.push_back(bracket(x, y, l.n));
    nd = span_basis(nd);
    if (nd.size() == d.size()) return false;
    d = nd;
  }
  return true;
}

struct Entry {
  const char* name;
  MatrixLieAlgebra l;
  bool class_h;
};

inline std::vector<Entry> catalog() {
  using namespace oracle_detail;
  int n = 2;
  Vec h = Hd(2, {1, -1}), e = E(2, 0, 1), f = E(2, 1, 0);
  std::vector<Entry> c{
      {"sl2", alg(n, {h, e, f}), true},
      {"borel2", alg(n, {h, e}), false},
      {"upper2", alg(n, {e}), true},
      {"cartan2", alg(n, {h}), false},
  };
  n = 3;
  c.push_back({"sl3", full_sl(3), true});
  c.push_back({"borel3", alg(3, {Hd(3, {1, -1, 0}), Hd(3, {0, 1, -1}), E(3, 0, 1), E(3, 0, 2), E(3, 1, 2)}), false});
  c.push_back({"heisenberg", alg(3, {E(3, 0, 1), E(3, 0, 2), E(3, 1, 2)}), true});
  c.push_back({"abelian_unip", alg(3, {E(3, 0, 1), E(3, 0, 2)}), true});
  c.push_back({"parabolic21",
               alg(3, {Hd(3, {1, -1, 0}), Hd(3, {0, 1, -1}), E(3, 0, 1), E(3, 1, 0), E(3, 0, 2), E(3, 1, 2)}),
               false});
  c.push_back({"sl2_in_sl3", alg(3, {Hd(3, {1, -1, 0}), E(3, 0, 1), E(3, 1, 0)}), true});
  c.push_back({"sl2_semidirect",
               alg(3, {Hd(3, {1, -1, 0}), E(3, 0, 1), E(3, 1, 0), E(3, 0, 2), E(3, 1, 2)}), true});
  c.push_back({"cartan3", alg(3, {Hd(3, {1, -1, 0}), Hd(3, {0, 1, -1})}), false});
  c.push_back({"torus_times_unip", alg(3, {Hd(3, {1, 1, -2}), E(3, 0, 1)}), false});
  return c;
}


// Number of conjugates of the upper unipotent of SL2 with height ≤ T: primitive (a, c) up to sign.
inline long oracle_count(long T) {
  long r = static_cast<long>(std::sqrt(static_cast<double>(T))) + 1;
  long count = 0;
  for (long a = -r; a <= r; ++a)
    for (long c = -r; c <= r; ++c) {
      if (std::gcd(a, c) != 1) continue;
      if (std::max(a * a, c * c) > T) continue;
      if (a < 0 || (a == 0 && c < 0)) continue;
      ++count;
    }
  return count;
}


}  // namespace th
