#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unilin/constants.hpp"
#include "unilin/lattice.hpp"
#include "unilin/lie.hpp"
#include "unilin/subgroups.hpp"

namespace unilin {

struct OneParameterUnipotent {
  Mat z;        // nilpotent generator, sup norm 1
  Q scale = 1;  // the input generator was scale * z
  MatPoly u;    // u(t) = exp(t z)

  static OneParameterUnipotent make(const Mat& z);
  Mat at(const Q& t) const { return u.at(t); }
  int n() const { return static_cast<int>(z.size()); }
  // u(t) u(s) = u(t + s) as a polynomial identity: coeff_i coeff_j = binom(i + j, i) coeff_{i+j}.
  bool one_parameter_identity() const;
  UnipotentDirection direction() const;
};

Mat exp_nilpotent_matrix(const Mat& x);
Mat log_unipotent(const Mat& x);
// log(exp x exp y) for nilpotent x, y in a nilpotent matrix algebra (exact BCH at nilpotency depth).
Mat bch(const Mat& x, const Mat& y);

// λ_k multiplies grade i of the lower central series of u by aQ^{(i+1)k}.
struct ExpandingMap {
  MatrixLieAlgebra u;
  std::vector<Vec> basis;  // graded integral basis, sl_n coordinates
  std::vector<int> grade;
  Q aQ = 20;

  static ExpandingMap make(const MatrixLieAlgebra& u, const Q& aQ);
  int dim() const { return static_cast<int>(basis.size()); }
  Vec coords(const Mat& x) const;            // graded coordinates of an element of u
  Mat element(const Vec& coords) const;      // matrix with the given graded coordinates
  Vec scale(long k, const Vec& coords) const;
};

struct ContainmentReport {
  long k = 0;
  long kappa = 0;
  int samples = 0;
  int failures = 0;
  double worst = 0;  // max over samples of the sup norm of λ_k^{-1}(log(exp λ_{k-κ} x exp λ_{k-1} y))
  bool holds() const { return failures == 0; }
};
ContainmentReport containment_check(const ExpandingMap& m, long k, long kappa, int samples, std::uint64_t seed);

struct CatalogCell {
  Q c;
  Q wedge;
};

struct ScanRow {
  Q xi;
  Q s;                     // aQ^k xi
  bool in_x_eta = true;
  Q witness_c;             // c of a short vector when outside X_η
  bool diophantine = true;
  int violator = -1;
  bool exceptional = false;
  std::vector<CatalogCell> cells;
};

struct ScanParams {
  long k = 0;
  int grid = 100;
  Q eta = Q(1, 100);
  long double t = 5;
  EpsilonProfile eps;
  std::vector<SubgroupDescriptor> catalog;
  MatrixLieAlgebra ambient;
  int threads = 1;
};

struct OrbitScanReport {
  Q aQ;
  long k = 0;
  int grid = 0;
  Q eta;
  long double t = 0;
  Q size_raw, size_reduced;
  Mat g_reduced;
  std::vector<ScanRow> rows;
  long outside_x_eta = 0;
  long non_diophantine = 0;
  long exceptional = 0;
  Q fraction;           // exceptional / grid
  Q fraction_outside;   // outside X_η / grid
  bool vacuous_catalog = false;
  std::vector<Q> max_c, max_wedge;  // per catalog entry over all samples
};

std::vector<Q> midpoint_grid(int grid);
OrbitScanReport orbit_scan(const Mat& g, const OneParameterUnipotent& U, const ScanParams& p,
                           const ConstantsProfile& k);

enum class Alternative { Alt1, Alt2, Alt3, Inconclusive };
const char* alternative_name(Alternative a);

struct Alt2Row {
  int entry = -1;
  bool c_ok = false, wedge_ok = false;
  long double log_c_margin = 0;      // log bound - log max c
  long double log_wedge_margin = 0;  // log bound - log max wedge (inf when the wedge vanishes)
};
struct Alt3Row {
  int entry = -1;
  Q wedge;
  long double log_margin = 0;
  bool ok = false;
};

struct TrichotomyVerdict {
  Alternative alt = Alternative::Inconclusive;
  int entry = -1;
  std::string name;
  Q fraction;
  double alt1_bound = 0;  // E1 η^{1/D}
  bool alt1 = false;
  std::vector<Alt2Row> alt2;
  std::vector<Alt3Row> alt3;
  std::string nearest_miss;
};
TrichotomyVerdict trichotomy_classify(const OrbitScanReport& r, const ConstantsProfile& k,
                                      const std::vector<SubgroupDescriptor>& catalog, const UnipotentDirection& u);

struct InheritanceReport {
  enum class Status { PreconditionFailed, Vacuous, Pass, Fail };
  Status status = Status::PreconditionFailed;
  std::string reason;
  Q fraction;
  double bound = 0;   // E1 η^{1/D}
  double margin = 0;  // bound - fraction
  bool hypothesis_met = false;  // t', k >= C2 (t + log 1/η + log 1/ε2)
  std::optional<OrbitScanReport> scan;
};
const char* status_name(InheritanceReport::Status s);
// Throws PreconditionUnverifiable when the catalog is empty.
InheritanceReport inheritance_check(const Mat& g, const OneParameterUnipotent& U, const Q& eta, long double t,
                                    long double t_prime, long k, const Q& eps2, const ScanParams& base,
                                    const ConstantsProfile& konst);

struct PipelineReport {
  long k = 0;
  bool triggered = false;
  Q fraction_outside;
  double trigger_bound = 0;  // E η^{1/F}
  std::optional<FlagProfile> flag;
  std::optional<ObstructionResult> obstruction;
  std::optional<SubgroupDescriptor> M;
  bool a_ok = false, b_ok = false;
  Q max_c, max_wedge;
  long double log_c_bound = 0, log_wedge_bound = 0;
  int counterexample = -1;  // sample index violating (a) or (b)
  std::string diagnostic;
};
PipelineReport obstruction_pipeline(const Mat& g, const OneParameterUnipotent& U, long k, int grid, const Q& eta,
                                    const MatrixLieAlgebra& ambient, const ConstantsProfile& konst);

struct ParabolicReport {
  bool found = false;
  bool insufficient = false;
  std::vector<PipelineReport> runs;
  std::optional<MatrixLieAlgebra> parabolic;
  bool membership = false;
  std::string diagnostic;
};
ParabolicReport parabolic_limit_check(const Mat& g, const OneParameterUnipotent& U, const std::vector<long>& ks,
                                      int grid, const Q& eta, const MatrixLieAlgebra& ambient,
                                      const ConstantsProfile& konst);

}  // namespace unilin
