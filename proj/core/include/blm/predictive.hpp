#pragma once

#include <optional>

#include "blm/conjugate.hpp"
#include "blm/distributions.hpp"

namespace blm {

/// Where to predict: m new responses with regressor rows Xm, cross
/// covariance v with the observed responses (lambda-scaled, zero when
/// independent) and marginal covariance Am_inv of the new block.
/// Construction whitens v against the model factor and validates that the
/// assembled joint covariance is positive semidefinite; targets that
/// coincide with observed points sit exactly on the semidefinite boundary
/// and are accepted.
class PredictionTarget {
 public:
  /// v = 0, Am_inv = I. Needs no model; usable with a deserialized posterior.
  static PredictionTarget independent(MatrixXd Xm);
  static PredictionTarget correlated(const ModelSpec& model, MatrixXd Xm,
                                     const MatrixXd& cross_cov, const SpdMatrix& target_cov);

  int m() const { return static_cast<int>(Xm_.rows()); }
  int p() const { return static_cast<int>(Xm_.cols()); }
  const MatrixXd& Xm() const { return Xm_; }
  bool independent_target() const { return !whitened_cross_.has_value(); }

  /// C_m = Xm - v'A X (Xm itself when independent). Multiplies theta_n in
  /// the conditional mean and propagates through the covariance.
  const MatrixXd& residual_regressor() const { return whitened_cross_ ? residual_ : Xm_; }
  /// a_m = L^{-1} v, so that v'A = a_m' L^{-1}.
  const std::optional<MatrixXd>& whitened_cross() const { return whitened_cross_; }
  /// Am_inv - v'A v, the covariance left after conditioning on the data.
  const MatrixXd& schur_complement() const { return schur_; }

 private:
  explicit PredictionTarget(MatrixXd Xm);

  MatrixXd Xm_;
  MatrixXd residual_;
  std::optional<MatrixXd> whitened_cross_;
  MatrixXd schur_;
};

/// Conditional Normal for a fixed lambda. The covariance is positive
/// semidefinite and collapses to zero at interpolation targets, so it is
/// kept as a plain matrix rather than a factored MvNormal.
struct PredictiveNormal {
  VectorXd mean;
  MatrixXd covariance;
  /// View as a proper distribution; throws NotPositiveDefinite when the
  /// covariance is singular.
  MvNormal to_mvnormal() const;
};

/// Posterior predictive t: dof = 2 alpha_n, dispersion (beta_n/alpha_n) *
/// B_m^{-1}. Dispersion is positive semidefinite with the same boundary
/// caveat as above.
struct PredictiveT {
  double dof;
  VectorXd mean;
  MatrixXd dispersion;
  MvT to_mvt() const;
};

/// Conditional Normal of the new responses given data, lambda fixed:
///   mean = v'A y + (Xm - v'A X) theta_n
///   cov  = lambda^{-1} [ (Am_inv - v'A v) + (Xm - v'A X) A_n^{-1} (Xm - v'A X)' ].
PredictiveNormal predict_known_lambda(const PosteriorSummary& post, const PredictionTarget& tgt,
                                      double lambda);

/// Same location, lambda integrated out against Ga(alpha_n, beta_n).
/// Requires an unknown lambda.
PredictiveT predict_t(const PosteriorSummary& post, const PredictionTarget& tgt);

/// Posterior of the linear functional T theta:
/// t(2 alpha_n, T theta_n, (beta_n/alpha_n) T A_n^{-1} T').
PredictiveT marginal_linear(const PosteriorSummary& post, const MatrixXd& T);
/// Known-lambda variant: N(T theta_n, lambda^{-1} T A_n^{-1} T').
PredictiveNormal marginal_linear_known_lambda(const PosteriorSummary& post, const MatrixXd& T,
                                              double lambda);

/// lambda | y ~ Ga(alpha_n, beta_n). Throws LambdaFixed when the model
/// declared lambda known.
GammaDist lambda_marginal(const PosteriorSummary& post);

}  // namespace blm
