#pragma once

#include <optional>

#include "blm/linalg.hpp"

namespace blm {

/// Multivariate Normal held through the lower Cholesky factor of its
/// covariance, so density evaluation needs one triangular solve and no
/// explicit inverse.
class MvNormal {
 public:
  MvNormal(VectorXd mean, LowerTriangular covariance_factor);
  static MvNormal from_covariance(VectorXd mean, const SpdMatrix& covariance);

  int dim() const { return static_cast<int>(mean_.size()); }
  const VectorXd& mean() const { return mean_; }
  const LowerTriangular& covariance_factor() const { return factor_; }

 private:
  VectorXd mean_;
  LowerTriangular factor_;
};

/// Multivariate t. The second parameter is the dispersion matrix D: the
/// density contains D^{-1}, and the covariance is nu/(nu-2) * D when it
/// exists. Construction factors D once; the value is immutable afterwards.
class MvT {
 public:
  MvT(double dof, VectorXd mean, SpdMatrix dispersion);

  int dim() const { return static_cast<int>(mean_.size()); }
  double dof() const { return dof_; }
  const VectorXd& mean() const { return mean_; }
  const SpdMatrix& dispersion() const { return dispersion_; }
  /// nu/(nu-2) * D, only defined for dof > 2.
  std::optional<MatrixXd> covariance() const;

 private:
  double dof_;
  VectorXd mean_;
  SpdMatrix dispersion_;
  LowerTriangular factor_;

  friend double mvt_logpdf(const MvT&, const VectorXd&);
};

/// Gamma in the shape/rate parametrization: mean = shape/rate.
struct GammaDist {
  GammaDist(double shape, double rate);
  double shape;
  double rate;
  double mean() const { return shape / rate; }
  double variance() const { return shape / (rate * rate); }
};

double mvn_logpdf(const MvNormal& d, const VectorXd& y);
double mvt_logpdf(const MvT& d, const VectorXd& y);
double gamma_logpdf(const GammaDist& d, double y);

/// Student t CDF with nu degrees of freedom, through the regularized
/// incomplete beta function.
double t_cdf(double nu, double x);

/// Student t quantile: x with CDF(x) = p. Bracketing bisection seeded from
/// the normal quantile; the bracket is widened geometrically first so heavy
/// tails cannot escape it.
double t_quantile(double nu, double p);

}  // namespace blm
