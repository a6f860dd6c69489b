#include "blm/linalg.hpp"

#include <cmath>
#include <string>

namespace blm {

namespace {

constexpr double kSymmetryRelTol = 1e-12;
constexpr double kPivotRelTol = 1e-13;

void check_square(const MatrixXd& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch(std::string(who) + ": expected a nonempty square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

SpdMatrix::SpdMatrix(MatrixXd m) : m_(std::move(m)) {
  check_square(m_, "SpdMatrix");
  const double scale = m_.cwiseAbs().maxCoeff();
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryRelTol * std::max(scale, 1e-300)) {
    throw DomainError("SpdMatrix: input is not symmetric (relative asymmetry " +
                      std::to_string(asym / std::max(scale, 1e-300)) + ")");
  }
  m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

SpdMatrix SpdMatrix::identity(int dim) { return SpdMatrix(MatrixXd::Identity(dim, dim)); }

LowerTriangular::LowerTriangular(MatrixXd m) : m_(std::move(m)) {
  check_square(m_, "LowerTriangular");
  const int n = dim();
  for (int j = 0; j < n; ++j) {
    if (!(m_(j, j) > 0.0)) {
      throw DomainError("LowerTriangular: diagonal entry " + std::to_string(j) +
                        " is not positive");
    }
    for (int i = 0; i < j; ++i) {
      if (m_(i, j) != 0.0) {
        throw DomainError("LowerTriangular: strictly-upper entry (" + std::to_string(i) + "," +
                          std::to_string(j) + ") is not zero");
      }
    }
  }
}

LowerTriangular LowerTriangular::identity(int dim) {
  return LowerTriangular(MatrixXd::Identity(dim, dim));
}

LowerTriangular cholesky(const SpdMatrix& m) {
  const int n = m.dim();
  const MatrixXd& a = m.matrix();
  const double threshold = kPivotRelTol * std::max(a.diagonal().maxCoeff(), 0.0);
  MatrixXd L = MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = a(j, j) - L.row(j).head(j).squaredNorm();
    if (pivot <= threshold) {
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(pivot) + " at column " +
                                    std::to_string(j) + " (matrix is not positive definite)",
                                j);
    }
    L(j, j) = std::sqrt(pivot);
    for (int i = j + 1; i < n; ++i) {
      const double s = L.row(i).head(j).dot(L.row(j).head(j));
      L(i, j) = (a(i, j) - s) / L(j, j);
    }
  }
  return LowerTriangular(std::move(L));
}

VectorXd forward_solve(const LowerTriangular& L, const VectorXd& b) {
  const int n = L.dim();
  if (b.size() != n) {
    throw DimensionMismatch("forward_solve: factor is " + std::to_string(n) +
                            "-dimensional but rhs has length " + std::to_string(b.size()));
  }
  const MatrixXd& l = L.matrix();
  VectorXd x(n);
  for (int i = 0; i < n; ++i) {
    x(i) = (b(i) - l.row(i).head(i).dot(x.head(i))) / l(i, i);
  }
  return x;
}

MatrixXd forward_solve(const LowerTriangular& L, const MatrixXd& B) {
  const int n = L.dim();
  if (B.rows() != n) {
    throw DimensionMismatch("forward_solve: factor is " + std::to_string(n) +
                            "-dimensional but rhs has " + std::to_string(B.rows()) + " rows");
  }
  MatrixXd X(n, B.cols());
  for (int c = 0; c < B.cols(); ++c) {
    X.col(c) = forward_solve(L, VectorXd(B.col(c)));
  }
  return X;
}

VectorXd back_solve(const LowerTriangular& L, const VectorXd& b) {
  const int n = L.dim();
  if (b.size() != n) {
    throw DimensionMismatch("back_solve: factor is " + std::to_string(n) +
                            "-dimensional but rhs has length " + std::to_string(b.size()));
  }
  const MatrixXd& l = L.matrix();
  VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) {
    x(i) = (b(i) - l.col(i).tail(n - i - 1).dot(x.tail(n - i - 1))) / l(i, i);
  }
  return x;
}

MatrixXd back_solve(const LowerTriangular& L, const MatrixXd& B) {
  const int n = L.dim();
  if (B.rows() != n) {
    throw DimensionMismatch("back_solve: factor is " + std::to_string(n) +
                            "-dimensional but rhs has " + std::to_string(B.rows()) + " rows");
  }
  MatrixXd X(n, B.cols());
  for (int c = 0; c < B.cols(); ++c) {
    X.col(c) = back_solve(L, VectorXd(B.col(c)));
  }
  return X;
}

VectorXd chol_solve(const LowerTriangular& L, const VectorXd& b) {
  return back_solve(L, forward_solve(L, b));
}

MatrixXd chol_solve(const LowerTriangular& L, const MatrixXd& B) {
  return back_solve(L, forward_solve(L, B));
}

LowerTriangular precision_factor(const SpdMatrix& sigma) {
  const int n = sigma.dim();
  const LowerTriangular L = cholesky(sigma);
  // Rows of sigma^{-1/2}: solve L u_i = e_i, so M = L^{-1} and
  // sigma^{-1} = M' M. Refactoring that product yields the lower factor the
  // callers expect.
  MatrixXd M = forward_solve(L, MatrixXd(MatrixXd::Identity(n, n)));
  MatrixXd A = M.transpose() * M;
  return cholesky(SpdMatrix(std::move(A)));
}

double logdet_from_chol(const LowerTriangular& L) {
  return 2.0 * L.matrix().diagonal().array().log().sum();
}

SpdMatrix spd_inverse_from_chol(const LowerTriangular& L) {
  const int n = L.dim();
  MatrixXd inv = chol_solve(L, MatrixXd(MatrixXd::Identity(n, n)));
  return SpdMatrix((inv + inv.transpose()) / 2.0);
}

SpdMatrix spd_inverse(const SpdMatrix& m) { return spd_inverse_from_chol(cholesky(m)); }

double inv_quad_form(const LowerTriangular& L, const VectorXd& v) {
  return forward_solve(L, v).squaredNorm();
}

std::optional<MatrixXd> semidefinite_cholesky(const MatrixXd& sym, double tol) {
  const int n = static_cast<int>(sym.rows());
  MatrixXd L = MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = sym(j, j) - L.row(j).head(j).squaredNorm();
    if (pivot > tol) {
      L(j, j) = std::sqrt(pivot);
      for (int i = j + 1; i < n; ++i) {
        const double s = L.row(i).head(j).dot(L.row(j).head(j));
        L(i, j) = (sym(i, j) - s) / L(j, j);
      }
    } else if (pivot >= -tol) {
      // Rank-deficient direction. Valid only if the rest of the column also
      // vanishes; otherwise the matrix is indefinite.
      L(j, j) = 0.0;
      for (int i = j + 1; i < n; ++i) {
        const double r = sym(i, j) - L.row(i).head(j).dot(L.row(j).head(j));
        if (std::abs(r) > std::sqrt(tol * std::max(std::abs(sym(i, i)), tol))) {
          return std::nullopt;
        }
        L(i, j) = 0.0;
      }
    } else {
      return std::nullopt;
    }
  }
  return L;
}

}  // namespace blm
