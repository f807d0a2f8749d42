#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "unilin/constants.hpp"
#include "unilin/lie.hpp"
#include "unilin/subgroups.hpp"

namespace unilin {

using ZVec = std::vector<Z>;

struct LatticeBasis {
  std::vector<Vec> vectors;  // independent generators in Q^ambient
  int ambient = 0;
  std::vector<Vec> frame;    // optional: vectors[j] is the image of frame[j] (rational integral basis)

  int rank() const { return static_cast<int>(vectors.size()); }
  Vec combine(const ZVec& x) const;
};

LatticeBasis make_lattice(const std::vector<Vec>& vectors);
LatticeBasis column_lattice(const Mat& g);
// Ad(g) applied to a saturated integral basis of the ambient algebra, in sl_n coordinates.
LatticeBasis adjoint_lattice(const Mat& g, const MatrixLieAlgebra& ambient);

Z floor_q(const Q& x);
Z round_q(const Q& x);

struct LllResult {
  std::vector<Vec> basis;
  std::vector<ZVec> transform;  // basis[i] = sum_j transform[i][j] * gens[j]
};
// Exact LLL; generators may be linearly dependent, zero vectors produced on the way are dropped.
LllResult lll(const std::vector<Vec>& gens, const Q& delta = Q(3, 4));

struct ShortVector {
  Vec v;
  ZVec coeffs;  // in the input lattice basis
  Q c;
};

// Visits every nonzero lattice vector (one of each ±pair) with squared Euclidean length at most
// radius2(); radius2 may shrink between calls.
void enumerate_lattice(const LatticeBasis& l, const std::function<Q()>& radius2,
                       const std::function<void(const Vec&, const ZVec&)>& visit);

ShortVector shortest_c(const LatticeBasis& l);

struct XEtaResult {
  bool in = true;
  std::optional<ShortVector> witness;
};
XEtaResult x_eta_lattice(const LatticeBasis& l, const Q& eta);
XEtaResult x_eta_test(const Mat& g, const Q& eta, const MatrixLieAlgebra& ambient);

Q group_size(const Mat& g);  // max(‖g‖, ‖g^{-1}‖) in the entrywise sup norm

struct Reduction {
  Mat gamma;
  Mat reduced;  // g * gamma
  Q size_before;
  Q size_after;
};
Reduction reduce_representative(const Mat& g);
// |gγ| ≤ E_G η^{-F}, decided exactly through powers.
bool reduction_bound_holds(const Reduction& r, const Q& eta, const ConstantsProfile& k);

struct Submodule {
  int rank = 0;
  std::vector<ZVec> coeffs;  // integer coordinates in the lattice basis
  std::vector<Vec> vectors;
  ExteriorVector w;
  Q c;
};
Submodule submodule(const LatticeBasis& l, const std::vector<ZVec>& coeffs);
// Smallest primitive submodule containing the given coefficient rows.
Submodule primitive_submodule(const LatticeBasis& l, const std::vector<ZVec>& coeffs);
bool contained(const Submodule& a, const Submodule& b);

struct AlphaResult {
  Q c_min;
  Q alpha;  // 1 / c_min
  Submodule witness;
};
AlphaResult alpha_i(const LatticeBasis& l, int i);
// Every primitive rank-i submodule with c < bound (or ≤ bound when inclusive), sorted by (c, w).
std::vector<Submodule> primitive_submodules_below(const LatticeBasis& l, int i, const Q& bound, bool inclusive,
                                                  long cap = 200000);

// Matrix polynomial M(t) = sum_m t^m coeffs[m].
struct MatPoly {
  std::vector<Mat> coeffs;
  Mat at(const Q& t) const;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int size() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs[0].size()); }
};
// exp(t z) for nilpotent z.
MatPoly exp_nilpotent(const Mat& z);
MatPoly rescale(const MatPoly& p, const Q& s);  // t -> s t

std::vector<Q> chebyshev_grid(int degree, int factor = 4);
// 1 / (cos(pi / (2 factor)) - degree^2 2^-25): the sup over [-1, 1] is at most this times the grid max.
double grid_certificate(int degree, int factor = 4);

struct FlagCandidate {
  Submodule sub;
  Q eta;            // max over the grid of c(M(t) Δ)
  double eta_upper; // certified sup over [-1, 1]
};

struct FlagProfile {
  int N = 0;
  std::vector<int> ranks;
  std::vector<Submodule> modules;
  std::vector<Q> eta;               // at the flag ranks
  Q eta_top = 1;                    // c of the whole lattice under the action (max over grid)
  std::vector<FlagCandidate> best;  // best candidate per rank 1..N-1 (rank 0 entries when none)
  std::vector<Q> grid;
  double certificate = 1;
  long candidates = 0;

  // Interpolated envelope value η(i), i in [0, N].
  long double log_eta(int i) const;
};

struct FlagParams {
  int grid_factor = 4;
  long candidate_cap = 200000;
};

FlagProfile flag_construct(const LatticeBasis& l, const MatPoly& action, const FlagParams& p = {});
// Exact check that −log η is concave over the vertices (0, flag ranks, N).
bool flag_concave(const FlagProfile& f);

struct ObstructionResult {
  bool found = false;
  std::string diagnostic;
  int r = 0;
  int k = 0;
  Q eta_k;
  bool bound_ok = false;  // η(k)^r ≤ ρ^k
  std::optional<SubgroupDescriptor> W;
  Q sigma_bar;            // nilpotency witness on failure
};
ObstructionResult detect_unipotent_obstruction(const FlagProfile& f, const LatticeBasis& l,
                                               const MatrixLieAlgebra& ambient, const Q& rho, const Q& kappa_prime);

struct CompletedFlag {
  std::vector<Submodule> modules;  // ranks 1..N
  std::vector<Q> c;
  double measured_A = 1;           // max over interpolated ranks of c_r / (c_i^τ c_j^(1-τ))
  bool within_A = true;            // exact comparison against the configured constant
};
CompletedFlag minkowski_complete(const FlagProfile& f, const LatticeBasis& l, const Mat& action_at_u, const Q& A);

struct SumIntersection {
  Q c1, c2, c_int, c_sum;
  double ratio;  // c_int c_sum / (c1 c2)
};
SumIntersection sum_intersection(const LatticeBasis& l, const Submodule& a, const Submodule& b);

LatticeBasis transform_lattice(const Mat& m, const LatticeBasis& l);

struct ExceptionalFit {
  std::vector<Q> eps;
  std::vector<double> fraction;
  // Least-squares slope of log fraction against log ε; zero fractions enter at the resolution floor
  // 1/samples. +inf when every fraction is zero.
  double exponent = 0;
  bool all_zero = false;
};
// Fraction of the sample points u with α_i(M(u) L)^{-1} < ε^i η(i) for some 1 ≤ i < N.
ExceptionalFit exceptional_fit(const FlagProfile& f, const LatticeBasis& l, const MatPoly& action,
                               const std::vector<Q>& samples, const std::vector<Q>& eps);

}  // namespace unilin
