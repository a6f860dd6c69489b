#pragma once

#include <Eigen/Core>
#include <optional>

#include "blm/errors.hpp"

namespace blm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense symmetric positive definite matrix. The constructor checks symmetry
/// to a 1e-12 relative tolerance and stores the symmetrized (M + M')/2 so
/// round-off from upstream products cannot accumulate. Positive definiteness
/// is established by cholesky(), not at construction.
class SpdMatrix {
 public:
  explicit SpdMatrix(MatrixXd m);
  static SpdMatrix identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  MatrixXd m_;
};

/// Dense lower-triangular matrix with positive diagonal. Strictly-upper
/// entries must be exactly zero.
class LowerTriangular {
 public:
  explicit LowerTriangular(MatrixXd m);
  static LowerTriangular identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  MatrixXd m_;
};

/// Cholesky factorization m = L L'. Fails with NotPositiveDefinite, reporting
/// the failing column, when a pivot drops below 1e-13 times the largest
/// diagonal entry.
LowerTriangular cholesky(const SpdMatrix& m);

/// Solves L x = b by forward substitution.
VectorXd forward_solve(const LowerTriangular& L, const VectorXd& b);
/// Column-wise forward substitution: solves L X = B.
MatrixXd forward_solve(const LowerTriangular& L, const MatrixXd& B);

/// Solves L' x = b by back substitution.
VectorXd back_solve(const LowerTriangular& L, const VectorXd& b);
MatrixXd back_solve(const LowerTriangular& L, const MatrixXd& B);

/// Solves (L L') x = b with one forward and one back substitution.
VectorXd chol_solve(const LowerTriangular& L, const VectorXd& b);
MatrixXd chol_solve(const LowerTriangular& L, const MatrixXd& B);

/// Lower factor U with U U' = sigma^{-1}. Computed from the factor of sigma
/// by triangular solves against unit vectors; sigma itself is never inverted
/// through a general routine.
LowerTriangular precision_factor(const SpdMatrix& sigma);

/// log|L L'| = 2 * sum_i log L_ii.
double logdet_from_chol(const LowerTriangular& L);

/// Inverse of an SPD matrix through its Cholesky factor; the result is
/// symmetrized. Intended for small (p x p) matrices.
SpdMatrix spd_inverse(const SpdMatrix& m);
/// Same, reusing an already computed factor of m.
SpdMatrix spd_inverse_from_chol(const LowerTriangular& L);

/// ||L^{-1} v||^2 = v' (L L')^{-1} v.
double inv_quad_form(const LowerTriangular& L, const VectorXd& v);

/// Tolerant factorization of a symmetric positive *semi*definite matrix.
/// Pivots within `tol` of zero are clamped to zero together with their
/// column, which handles the rank-deficient matrices that arise when a
/// prediction target coincides with an observed point. Returns std::nullopt
/// when the matrix is decidedly indefinite at that tolerance. `tol` is
/// absolute.
std::optional<MatrixXd> semidefinite_cholesky(const MatrixXd& sym, double tol);

}  // namespace blm
