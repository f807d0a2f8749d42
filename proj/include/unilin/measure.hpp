#pragma once

#include <string>
#include <utility>
#include <vector>

#include "unilin/exact.hpp"

namespace unilin {

// Univariate polynomial, coefficients c_0..c_n.
struct UPoly {
  std::vector<Q> c;

  int degree() const;
  Q operator()(const Q& t) const;
};
UPoly parse_upoly(const std::string& s, char var = 't');
std::string to_string(const UPoly& p, char var = 't');

// Range enclosure of p on [a, b] from Bernstein coefficients.
std::pair<Q, Q> bernstein_range(const UPoly& p, const Q& a, const Q& b);

struct FriendlyMeasure {
  enum class Kind { Lebesgue, Digit, Table };
  Kind kind = Kind::Lebesgue;
  int dim = 1;                 // only one-dimensional measures are supported
  int base = 2;                // subdivision base; for Digit the contraction is 1/base
  std::vector<int> digits;     // Digit: maps x -> (x + d) / base
  std::vector<Q> weights;
  std::vector<std::pair<Q, Q>> atoms;  // Table: (point, mass)

  static FriendlyMeasure lebesgue();
  static FriendlyMeasure cantor();
  static FriendlyMeasure digit(int base, std::vector<int> digits, std::vector<Q> weights);
  static FriendlyMeasure table(std::vector<std::pair<Q, Q>> atoms);

  void validate() const;
  std::string name() const;
  // μ((-inf, x]) for continuous kinds; for tables also μ((-inf, x)) via left().
  Q cdf(const Q& x) const;
  Q cdf_left(const Q& x) const;
  Q open(const Q& a, const Q& b) const;       // μ((a, b))
  Q half_open(const Q& a, const Q& b) const;  // μ([a, b))
  Q closed(const Q& a, const Q& b) const;     // μ([a, b])
  double dimension_alpha() const;             // decay exponent used as the Remez target
};

struct MapFactor {
  std::vector<UPoly> comps;  // F_v(t) = max_j |comps_j(t)|
  Q a = -1, b = 1;
  FriendlyMeasure mu;
};

// F(z) = prod_v F_v(z_v) on the product of the factor intervals.
struct PolynomialMap {
  std::vector<MapFactor> factors;
  int degree() const;
};

struct SublevelParams {
  double rel_res = 1e-3;   // stop once upper - lower <= rel_res * lower
  double abs_res = 1e-12;  // or upper - lower <= abs_res * μ(B)
  long max_boxes = 2000000;
  double sup_tol = 1e-15;
};

struct SupBracket {
  Q lo, hi;
};
SupBracket sup_bracket(const MapFactor& f, double rel_tol = 1e-15);

struct SublevelResult {
  Q delta;
  Q lower, upper;  // bracket for μ({F < δ sup F})
  Q total;         // μ(B)
  SupBracket sup;
  bool resolved = true;
  long boxes = 0;
  double ratio_lo() const;
  double ratio_hi() const;
};
SublevelResult sublevel_measure(const PolynomialMap& F, const Q& delta, const SublevelParams& p = {});

struct RemezFit {
  std::vector<SublevelResult> rows;
  double exponent = 0;  // fitted slope of log(ratio / |log δ|^(s-1)) against log δ
  double constant = 0;  // max ratio / (|log δ|^(s-1) δ^target)
  double target = 0;    // α_μ / d
  bool log_corrected = false;
};
RemezFit remez_verify(const PolynomialMap& F, int d, const std::vector<Q>& deltas, double tolerance,
                      const SublevelParams& p = {});

struct FedererResult {
  Q max_ratio;
  Q at_center, at_radius;
  bool finite = true;
  bool atomic = false;  // table measures have atoms, so they are never friendly
};
FedererResult federer_check(const FriendlyMeasure& mu, const std::vector<Q>& centers, const std::vector<Q>& radii);

struct DecayRow {
  Q s;          // δ / r
  Q max_ratio;  // max over J, a of μ(J ∩ I_δ(a)) / μ(J)
};
struct DecayResult {
  std::vector<DecayRow> rows;
  double alpha = 0;
  double c = 0;
  bool decaying = true;  // fitted alpha > 0 and every ratio tends to 0
};
DecayResult decaying_check(const FriendlyMeasure& mu, const std::vector<Q>& centers, const std::vector<Q>& radii,
                           const std::vector<Q>& s_values, int points_per_interval = 9);

// Support points of a digit measure reachable at a given level (left endpoints of cylinders).
std::vector<Q> support_points(const FriendlyMeasure& mu, int level);

}  // namespace unilin
