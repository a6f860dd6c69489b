#pragma once

#include <optional>
#include <utility>

#include "blm/linalg.hpp"

namespace blm {

/// Hyperparameters of a Normal-Gamma prior or posterior: coefficients are
/// N(theta, lambda^{-1} precision^{-1}) given lambda, and lambda is
/// Ga(shape, rate). When `lambda_known` is set the Gamma layer is inert:
/// lambda is that fixed constant and shape/rate ride along untouched.
struct NormalGammaParams {
  NormalGammaParams(VectorXd theta, SpdMatrix precision, double shape, double rate,
                    std::optional<double> lambda_known = std::nullopt);
  static NormalGammaParams with_known_lambda(VectorXd theta, SpdMatrix precision, double lambda);

  VectorXd theta;
  SpdMatrix precision;
  double shape;
  double rate;
  std::optional<double> lambda_known;

  int dim() const { return static_cast<int>(theta.size()); }
};

/// Design matrix X together with the error correlation Sigma, held through
/// the lower factor L of Sigma = L L'. Whitening multiplies by L^{-1} via
/// forward substitution; the cached whitened design H = L^{-1} X satisfies
/// H'H = X' Sigma^{-1} X, which is the only property downstream code relies
/// on. With identity correlation no factor is stored and H aliases X.
class ModelSpec {
 public:
  /// Sigma = I. An empty design (n = 0) is allowed here and yields the
  /// degenerate no-data update.
  static ModelSpec independent(MatrixXd design);
  ModelSpec(MatrixXd design, SpdMatrix sigma);

  int n() const { return static_cast<int>(design_.rows()); }
  int p() const { return static_cast<int>(design_.cols()); }
  const MatrixXd& design() const { return design_; }
  bool identity_correlation() const { return !noise_chol_.has_value(); }
  const SpdMatrix& correlation() const;
  const LowerTriangular& noise_chol() const;

  /// H = L^{-1} X (X itself under identity correlation).
  const MatrixXd& whitened_design() const { return noise_chol_ ? whitened_ : design_; }
  VectorXd whiten(const VectorXd& v) const;
  MatrixXd whiten(const MatrixXd& m) const;
  /// log|Sigma^{-1}| = -log|Sigma|.
  double log_det_precision() const;

 private:
  explicit ModelSpec(MatrixXd design);

  MatrixXd design_;
  std::optional<SpdMatrix> sigma_;
  std::optional<LowerTriangular> noise_chol_;
  MatrixXd whitened_;
};

/// Result of one conjugate update. Immutable once built; safe to share
/// across threads.
struct PosteriorSummary {
  NormalGammaParams posterior;
  double s2_n;  // weighted residual sum of squares (y - X theta_n)' A (y - X theta_n)
  double d2_n;  // prior-posterior discrepancy (theta_0 - theta_n)' A_0 (theta_0 - theta_n)
  LowerTriangular An_chol;
  SpdMatrix An_inv;
  double log_evidence;
  VectorXd whitened_response;  // L^{-1} y, reused by correlated prediction
};

/// Conjugate update (theta_0, A_0, alpha_0, beta_0) + (X, Sigma, y) ->
/// (theta_n, A_n, alpha_n, beta_n):
///   A_n     = A_0 + H'H
///   theta_n = A_n^{-1} (A_0 theta_0 + H' L^{-1} y)
///   alpha_n = alpha_0 + n/2
///   beta_n  = beta_0 + (s2_n + d2_n)/2
/// With lambda fixed, alpha/beta pass through unchanged; s2_n and d2_n are
/// still reported. n = 0 returns the prior with log_evidence = 0.
PosteriorSummary posterior_update(const NormalGammaParams& prior, const ModelSpec& model,
                                  const VectorXd& y);

/// beta_n through the marginal form
///   beta_0 + (y - X theta_0)' (Sigma + X A_0^{-1} X')^{-1} (y - X theta_0) / 2,
/// evaluated by a direct dense solve. O(n^3); used as a cross-check route.
double beta_n_marginal(const NormalGammaParams& prior, const ModelSpec& model, const VectorXd& y);

/// beta_n through the expansion
///   beta_0 + (y'Ay + theta_0'A_0 theta_0 - theta_n'A_n theta_n) / 2.
/// Cancellation-prone; kept for the three-way equivalence check.
double beta_n_naive(const NormalGammaParams& prior, const ModelSpec& model, const VectorXd& y);

/// For Sigma = I and full-rank X: the least-squares estimate
/// theta_hat = (X'X)^{-1} X'y and the weight W = A_n^{-1} X'X for which
/// theta_n = (I - W) theta_0 + W theta_hat.
std::pair<VectorXd, MatrixXd> mle_decomposition(const ModelSpec& model,
                                                const NormalGammaParams& prior,
                                                const VectorXd& y);

}  // namespace blm
