#pragma once

#include <map>
#include <string>
#include <vector>

#include "unilin/constants.hpp"
#include "unilin/exact.hpp"

namespace unilin {

using Monomial = std::vector<int>;

// Sparse polynomial over Q in a fixed number of variables; zero terms are never stored.
struct Poly {
  int nvars = 0;
  std::map<Monomial, Q> terms;

  static Poly constant(int nvars, const Q& c);
  static Poly variable(int nvars, int i);
  bool is_zero() const { return terms.empty(); }
  int total_degree() const;                         // 0 for the zero polynomial
  int degree_in(int i) const;
  bool integral() const;
  Q eval(const std::vector<Q>& x) const;
  Z eval(const std::vector<Z>& x) const;            // integral polynomials only
  Poly derivative(int i) const;
  bool operator==(const Poly& o) const { return nvars == o.nvars && terms == o.terms; }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Q& s, const Poly& a);
Poly pow(const Poly& a, int k);

Poly parse_poly(const std::string& s, const std::vector<std::string>& vars);
std::string to_string(const Poly& p, const std::vector<std::string>& vars);
// Variable names in order of first appearance across the given strings.
std::vector<std::string> collect_vars(const std::vector<std::string>& polys);

struct PolySystem {
  std::vector<std::string> vars;
  std::vector<Poly> f;
  int D0 = 0;       // declared total degree bound
  double h = 0;     // log max |coefficient|

  int m() const { return static_cast<int>(vars.size()); }
  int n() const { return static_cast<int>(f.size()); }
};
// Parses integral polynomials; D0 = 0 means "use the maximal total degree".
PolySystem make_system(const std::vector<std::string>& polys, std::vector<std::string> vars = {}, int D0 = 0);
double log_height(const Poly& p);

struct NssBounds {
  int m = 0, n = 0, D0 = 0, M = 0;
  double h = 0;
  Z b_bound;
  Z degree_bound;
  double log10_height_bound = 0;  // log10 of (8D0)^(4M-1) (h + 8D0 log 8D0), also bounds log|a|
  std::string convention = "implicit constants set to 1";
  std::string height_bound() const;  // decimal scientific notation
};
NssBounds nss_bounds(int m, int n, int D0, double h);

struct NssCertificate {
  Poly f;
  int b = 1;
  Z a = 1;
  std::vector<Poly> q;
};

struct CertificateReport {
  bool valid = false;     // a f^b = sum q_i f_i holds exactly
  std::string reason;
  NssBounds bounds;
  bool b_ok = false, degree_ok = false, height_ok = false;
  int max_cofactor_degree = 0;
  double max_cofactor_height = 0;
};
CertificateReport verify_certificate(const NssCertificate& cert, const PolySystem& sys);

// Univariate systems: certificate from the extended Euclidean algorithm, smallest b with gcd | f^b.
NssCertificate euclid_certificate(const PolySystem& sys, const Poly& f);

// C1 e^{-k h} (|w|^2 / b)^{-k}
long double brownawell_bound(int n, int m, int D0, double h, const Q& w_norm, const Q& b, const Q& C1, int k);

struct HenselStep {
  int step = 0;
  std::vector<Z> y;
  long valuation;   // min_j v_p(f_j(y_k)) over the selected equations (capped at the target)
  long bound;       // 2 e_{k-1} - 2v, or C2 at step 0
  long proximity;   // v_p(y_k - w)
};

struct HenselResult {
  long p = 0;
  long target = 0;
  long C2 = 0;
  std::vector<Z> y;                   // residues mod p^target
  std::vector<std::vector<int>> digits;  // base-p digits of y, little-endian, target many
  std::vector<int> rows, cols;        // selected square subsystem
  long minor_valuation = 0;
  long proximity = 0;                 // v_p(y - w), capped at the target
  bool congruence_ok = false;         // every f_j(y) = 0 mod p^target
  bool proximity_ok = false;          // v_p(y - w) >= C2 - 2v
  bool exact_root = false;
  std::vector<HenselStep> steps;
  std::string diagnostic;
};
HenselResult hensel_lift(const PolySystem& sys, const std::vector<Z>& w, long p, long C2, long target,
                         long max_precision = 1 << 16);

long padic_valuation(const Z& x, long p, long cap);  // cap when x == 0

}  // namespace unilin
