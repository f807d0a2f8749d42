#pragma once

#include <vector>

#include "unilin/exact.hpp"

namespace unilin {

// sl_N coordinates: H_i = E_ii - E_{i+1,i+1} (i < N), then E_ij for i < j, then E_ij for i > j,
// both blocks in lexicographic order. For N = 2 this is (h, e, f).
int sl_dim(int n);
Mat sl_matrix(const Vec& coords, int n);
Vec sl_coords(const Mat& m);  // requires trace zero
Vec sl_basis_vector(int n, int j);
Mat elementary(int n, int i, int j);  // E_ij, 0-based

Vec bracket(const Vec& z, const Vec& w, int n);
Mat mat_bracket(const Mat& a, const Mat& b);
// Matrix of Ad(g) on sl_N coordinates.
Mat adjoint(const Mat& g);

struct MatrixLieAlgebra {
  int n = 0;                // ambient sl_n
  std::vector<Vec> basis;   // sl_n coordinates, independent

  int dim() const { return static_cast<int>(basis.size()); }
  int ambient_dim() const { return sl_dim(n); }
};

// Checks independence and bracket closure; throws DependentBasis / NotClosed.
MatrixLieAlgebra make_algebra(int n, const std::vector<Vec>& basis);
MatrixLieAlgebra make_algebra_from_matrices(const std::vector<Mat>& mats);
// Smallest subalgebra containing the generators.
MatrixLieAlgebra generated_algebra(int n, const std::vector<Vec>& gens);
MatrixLieAlgebra full_sl(int n);
MatrixLieAlgebra zero_algebra(int n);

bool same_algebra(const MatrixLieAlgebra& a, const MatrixLieAlgebra& b);
bool contains(const MatrixLieAlgebra& a, const Vec& z);
MatrixLieAlgebra integral_basis(const MatrixLieAlgebra& a);  // saturated Z-basis of a ∩ sl_n(Z)

// ad(z) restricted to L, in L's basis.
Mat ad_in(const MatrixLieAlgebra& l, const Vec& z);
Mat killing_matrix(const MatrixLieAlgebra& l);
std::vector<Vec> derived_subspace(const MatrixLieAlgebra& l, const std::vector<Vec>& a,
                                  const std::vector<Vec>& b);
MatrixLieAlgebra derived_algebra(const MatrixLieAlgebra& l);

struct Radicals {
  MatrixLieAlgebra radical;
  MatrixLieAlgebra unipotent_radical;
};
Radicals radical_and_unipotent_radical(const MatrixLieAlgebra& l);
MatrixLieAlgebra class_h_closure(const MatrixLieAlgebra& l);
bool is_class_h(const MatrixLieAlgebra& l);

struct NilpotencyCertificate {
  bool nilpotent = false;
  Q sigma_bar;  // lowest nonzero non-leading coefficient of det(tI - w), 0 when nilpotent
};
NilpotencyCertificate is_nilpotent_element(const Mat& w);

MatrixLieAlgebra normalizer(const MatrixLieAlgebra& g, const MatrixLieAlgebra& u);
bool is_ideal(const MatrixLieAlgebra& g, const MatrixLieAlgebra& h);

struct ParabolicTrace {
  MatrixLieAlgebra parabolic;
  std::vector<MatrixLieAlgebra> chain;  // u_0, u_1, ... until stabilization
};
ParabolicTrace parabolic_from_nilpotent(const MatrixLieAlgebra& g, const std::vector<Vec>& w);

struct CentralSeries {
  std::vector<MatrixLieAlgebra> chain;        // u_0 = u ⊃ u_1 ⊃ ... ⊃ 0 (last nonzero kept)
  std::vector<std::vector<Vec>> grades;       // integral complements u^i of u_{i+1} in u_i
};
CentralSeries lower_central_series(const MatrixLieAlgebra& u);

}  // namespace unilin
