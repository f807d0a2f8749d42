#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "unilin/exact.hpp"

namespace th {

using unilin::Mat;
using unilin::Q;
using unilin::Vec;
using unilin::Z;

inline Q q(const std::string& s) { return unilin::parse_rational(s); }
inline Q q(long n) { return Q(n); }
inline Q q(long n, long d) {
  Q r(n, d);
  r.canonicalize();
  return r;
}

inline Vec vec(std::initializer_list<Q> xs) { return Vec(xs); }
inline Vec ivec(std::initializer_list<long> xs) {
  Vec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}
inline Mat imat(std::initializer_list<std::initializer_list<long>> rows) {
  Mat m;
  for (auto r : rows) {
    Vec v;
    for (long x : r) v.emplace_back(x);
    m.push_back(v);
  }
  return m;
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
  Q rational(long num, long den) {
    Q r(uniform(-num, num), uniform(1, den));
    r.canonicalize();
    return r;
  }
  Vec rvec(std::size_t n, long num, long den) {
    Vec v(n);
    for (auto& x : v) x = rational(num, den);
    return v;
  }
  bool coin() { return uniform(0, 1) == 1; }
};

// Random element of SL_n(Z) as a product of elementary matrices.
inline Mat random_sl_z(Rng& r, int n, int steps, long bound = 2) {
  Mat g = unilin::identity(n);
  for (int s = 0; s < steps; ++s) {
    int i = static_cast<int>(r.uniform(0, n - 1)), j = static_cast<int>(r.uniform(0, n - 1));
    if (i == j) continue;
    long c = r.uniform(-bound, bound);
    for (int k = 0; k < n; ++k) g[i][k] += c * g[j][k];
  }
  return g;
}

}  // namespace th
