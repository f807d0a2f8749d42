#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "unilin/errors.hpp"

namespace unilin {

using Q = mpq_class;
using Z = mpz_class;
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;  // row-major

Q parse_rational(const std::string& s);
std::string to_string(const Q& x);
std::string to_string(const Z& x);

// log|x| for x != 0, safe for huge numerators/denominators.
long double log_abs(const Z& x);
long double log_abs(const Q& x);
double to_double(const Q& x);

// Places are identified by an integer: 0 is the archimedean place, otherwise a prime.
constexpr long kInfinity = 0;

struct PlaceSystem {
  std::vector<long> primes;

  static PlaceSystem archimedean() { return {}; }
  std::size_t size() const { return primes.size() + 1; }
  std::vector<long> places() const;
  void validate() const;
};

bool is_prime(long p);
long valuation(const Z& x, long p);
long valuation(const Q& x, long p);
Q place_abs(const Q& x, long place);
Q place_norm(const Vec& v, long place);
Q c_fun(const Vec& v, const PlaceSystem& sigma);

// Exterior algebra element over a coordinate basis of size `ambient`.
// Multi-indices are 0-based and strictly increasing; zero entries are never stored.
struct ExteriorVector {
  int degree = 0;
  int ambient = 0;
  std::map<std::vector<int>, Q> comp;

  bool is_zero() const { return comp.empty(); }
  bool operator==(const ExteriorVector& o) const {
    return degree == o.degree && ambient == o.ambient && comp == o.comp;
  }
  void add(const std::vector<int>& idx, const Q& x);
  ExteriorVector scaled(const Q& s) const;
  ExteriorVector operator-() const { return scaled(Q(-1)); }
  ExteriorVector plus(const ExteriorVector& o) const;
};

Q place_norm(const ExteriorVector& v, long place);
Q c_fun(const ExteriorVector& v, const PlaceSystem& sigma);
Q sup_norm(const Vec& v);
Q sup_norm(const ExteriorVector& v);

ExteriorVector ext_unit(int ambient);  // degree 0, value 1
ExteriorVector wedge(const ExteriorVector& w, const Vec& v);
ExteriorVector wedge(const std::vector<Vec>& vs, int ambient);
ExteriorVector wedge(const Vec& z, const ExteriorVector& w);
// (wedge^k A) applied to w, computed column by column through minors.
ExteriorVector ext_apply(const Mat& A, const ExteriorVector& w);
// Dimension of {v : v ^ w = 0}; equals degree iff w is nonzero and decomposable.
int annihilator_dim(const ExteriorVector& w);
// Flat coordinate list over all increasing multi-indices in lexicographic order.
std::vector<std::vector<int>> multi_indices(int n, int k);
Vec ext_coords(const ExteriorVector& w);
ExteriorVector ext_from_coords(const Vec& c, int ambient, int degree);

// Integer content helpers.
bool is_integral(const Vec& v);
bool is_integral(const ExteriorVector& w);
Vec primitive_integer(const Vec& v);  // scale to coprime integers, sign kept
ExteriorVector primitive_integer(const ExteriorVector& w);
// Canonical sign: first nonzero component positive.
Vec canonical_sign(const Vec& v);
ExteriorVector canonical_sign(const ExteriorVector& w);

struct UnitElement {
  int sign = 1;
  std::vector<long> exponents;  // one per finite prime of the place system

  Q value(const PlaceSystem& sigma) const;
};

struct UnitMinimization {
  UnitElement r0;
  Vec rescaled;
  std::vector<Q> place_norms;  // per place of the rescaled vector, archimedean first
  Q sigma_norm;                // max of place_norms
  Q c_value;
  double constant = 0;         // sigma_norm / c^(1/#places)
};

UnitMinimization minimize_over_units(const Vec& v, const PlaceSystem& sigma);

// ---- rational linear algebra ----
Mat identity(int n);
Mat zeros(int r, int c);
Mat mul(const Mat& a, const Mat& b);
Vec mul(const Mat& a, const Vec& v);
Mat transpose(const Mat& a);
Mat add(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);
Mat scale(const Mat& a, const Q& s);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Q& s);
Q dot(const Vec& a, const Vec& b);
bool is_zero(const Vec& v);
bool is_zero(const Mat& m);
Q trace(const Mat& a);
Q det(Mat a);
Mat inverse(const Mat& a);  // throws DependentBasis when singular
Q sup_norm(const Mat& m);

struct Rref {
  Mat rows;                 // nonzero rows only
  std::vector<int> pivots;  // pivot column per row
};
Rref rref(const Mat& rows);
int rank(const Mat& rows);
// Basis of {x : A x = 0}.
std::vector<Vec> nullspace(const Mat& a, int ncols);
// Echelon basis of the row span.
std::vector<Vec> span_basis(const std::vector<Vec>& vs);
bool in_span(const std::vector<Vec>& basis, const Vec& v);
bool same_span(const std::vector<Vec>& a, const std::vector<Vec>& b);
bool subspace_of(const std::vector<Vec>& a, const std::vector<Vec>& b);  // span a ⊆ span b
std::vector<Vec> intersect(const std::vector<Vec>& a, const std::vector<Vec>& b);
// Basis of the annihilator {y : y·v = 0 for v in span}.
std::vector<Vec> annihilator(const std::vector<Vec>& basis, int n);

// Coordinates of vectors in a fixed independent family.
class SpanCoords {
 public:
  SpanCoords() = default;
  explicit SpanCoords(const std::vector<Vec>& basis);
  bool contains(const Vec& v) const;
  Vec coords(const Vec& v) const;  // throws InvalidArgument when outside the span
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis() const { return basis_; }

 private:
  std::vector<Vec> basis_;
  Mat red_;                 // echelon rows
  std::vector<int> piv_;
  Mat tr_;                  // red_ = tr_ * basis_
  bool reduce(Vec& v, Vec& c) const;
};

// Coefficients c_0..c_n of det(t I - A) (c_n = 1).
std::vector<Q> char_poly(const Mat& a);

// ---- integer lattices ----
// Basis of the Z-span of integer generator rows (Hermite form, upper echelon).
std::vector<std::vector<Z>> hnf_rows(std::vector<std::vector<Z>> rows, int ncols);
// Z-basis of span(basis) ∩ Z^n.
std::vector<Vec> saturate(const std::vector<Vec>& basis);

struct PrimitiveVector {
  ExteriorVector v;           // coprime integers, canonical sign
  std::vector<Vec> zbasis;    // saturated Z-basis with wedge(zbasis) == v
  Z height;
};
PrimitiveVector primitive_integral_vector(const std::vector<Vec>& basis, int ambient);

}  // namespace unilin
