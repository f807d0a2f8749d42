#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unilin/constants.hpp"
#include "unilin/lie.hpp"

namespace unilin {

struct SubgroupDescriptor {
  std::string name;
  MatrixLieAlgebra lie;  // saturated integral basis; wedge(lie.basis) == v exactly
  ExteriorVector v;
  int dim = 0;
  Z height;
  bool class_h = false;
  bool normal_in_G = false;
};

SubgroupDescriptor describe(const MatrixLieAlgebra& h, const MatrixLieAlgebra& ambient,
                            const std::string& name = "");
// γHγ^{-1} for γ in SL_N(Z); reuses the class-H and normality flags of H.
SubgroupDescriptor conjugate(const SubgroupDescriptor& h, const Mat& gamma, const std::string& name = "");

struct UnipotentDirection {
  int n = 0;
  std::vector<Vec> basis;   // sl_n coordinates
  std::vector<long> places; // place tag per basis element
};
UnipotentDirection make_direction(int n, const std::vector<Vec>& basis);

ExteriorVector eta_H(const Mat& g, const SubgroupDescriptor& h);
ExteriorVector eta_H_from_adjoint(const Mat& ad_g, const SubgroupDescriptor& h);
Q max_wedge(const UnipotentDirection& u, const ExteriorVector& w);

struct Stabilizer {
  MatrixLieAlgebra lie_L;
  SubgroupDescriptor M;
};
Stabilizer stabilizer_L_H(const SubgroupDescriptor& h, const MatrixLieAlgebra& ambient);

struct EpsilonProfile {
  enum class Kind { Parametric, Table, Sigma };
  Kind kind = Kind::Parametric;
  long A = 4;
  Q E1 = 10;
  Q eta = Q(1, 100);
  Q cap = Q(1, 2);
  std::vector<std::pair<Q, Q>> table;        // (s_i, eps_i), s increasing; step function
  std::vector<SubgroupDescriptor> normal;    // sigma-aware kind
  UnipotentDirection u;

  Q operator()(const Q& s) const;
  bool monotone() const;
};

EpsilonProfile parametric_epsilon(const ConstantsProfile& k, const Q& eta);
EpsilonProfile sigma_epsilon(const ConstantsProfile& k, const Q& eta, std::vector<SubgroupDescriptor> normal,
                             UnipotentDirection u);

struct DiophantineRow {
  Q c;
  Q wedge;
  bool considered = false;  // c < e^t
  bool violated = false;
};

struct DiophantineVerdict {
  bool diophantine = true;
  bool vacuous = false;  // empty catalog
  int violator = -1;
  std::vector<DiophantineRow> rows;
};

// log c < t decided in extended precision from exact c.
bool below_exp(const Q& c, long double t);

DiophantineVerdict diophantine_test(const Mat& g, const EpsilonProfile& eps, long double t,
                                    const std::vector<SubgroupDescriptor>& catalog, const UnipotentDirection& u);
DiophantineVerdict diophantine_test_adjoint(const Mat& ad_g, const EpsilonProfile& eps, long double t,
                                            const std::vector<SubgroupDescriptor>& catalog,
                                            const UnipotentDirection& u);

bool tube_membership(const Mat& g, const SubgroupDescriptor& h, const Q& bound, const UnipotentDirection& u);

struct CatalogResult {
  std::vector<SubgroupDescriptor> entries;
  std::vector<Mat> words;        // γ with entry = γHγ^{-1}
  std::vector<int> word_length;
  bool word_bound_binding = false;
  long nodes = 0;
};
// Entries are sorted by (height, v). The frontier is expanded on `threads` workers and merged in order.
CatalogResult gamma_orbit_catalog(const SubgroupDescriptor& h, const std::vector<Mat>& generators,
                                  const Q& height_bound, int word_bound, const Q& margin, int threads = 1);

Q sigma_T(const std::vector<SubgroupDescriptor>& normal_catalog, const Q& T, const UnipotentDirection& u);

struct LojResult {
  SubgroupDescriptor h12;
  Q c;
  Q wedge;
  bool precondition_met = false;  // both c(η_Hi(g)) ≤ r and both wedge norms ≤ eps_bound
};
LojResult loj_intersection(const Mat& g, const SubgroupDescriptor& h1, const SubgroupDescriptor& h2,
                           const MatrixLieAlgebra& ambient, const UnipotentDirection& u, const Q& r,
                           const Q& eps_bound);

}  // namespace unilin
