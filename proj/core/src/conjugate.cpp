#include "blm/conjugate.hpp"

#include <cmath>
#include <string>

#include "blm/evidence.hpp"

namespace blm {

NormalGammaParams::NormalGammaParams(VectorXd theta_in, SpdMatrix precision_in, double shape_in,
                                     double rate_in, std::optional<double> lambda_known_in)
    : theta(std::move(theta_in)),
      precision(std::move(precision_in)),
      shape(shape_in),
      rate(rate_in),
      lambda_known(lambda_known_in) {
  if (precision.dim() != dim()) {
    throw DimensionMismatch("NormalGammaParams: precision is " + std::to_string(precision.dim()) +
                            "-dimensional but theta has length " + std::to_string(dim()));
  }
  if (!lambda_known && (!(shape > 0.0) || !(rate > 0.0))) {
    throw DomainError("NormalGammaParams: shape and rate must be positive when lambda is unknown");
  }
  if (lambda_known && !(*lambda_known > 0.0)) {
    throw DomainError("NormalGammaParams: fixed lambda must be positive");
  }
}

NormalGammaParams NormalGammaParams::with_known_lambda(VectorXd theta, SpdMatrix precision,
                                                       double lambda) {
  return NormalGammaParams(std::move(theta), std::move(precision), 1.0, 1.0, lambda);
}

ModelSpec::ModelSpec(MatrixXd design) : design_(std::move(design)) {
  if (design_.cols() < 1) {
    throw DimensionMismatch("ModelSpec: design needs at least one column");
  }
}

ModelSpec ModelSpec::independent(MatrixXd design) { return ModelSpec(std::move(design)); }

ModelSpec::ModelSpec(MatrixXd design, SpdMatrix sigma) : ModelSpec(std::move(design)) {
  if (sigma.dim() != n()) {
    throw DimensionMismatch("ModelSpec: correlation is " + std::to_string(sigma.dim()) +
                            "-dimensional but the design has " + std::to_string(n()) + " rows");
  }
  if (n() == 0) {
    throw DimensionMismatch("ModelSpec: a correlated model needs at least one observation");
  }
  sigma_ = std::move(sigma);
  noise_chol_ = cholesky(*sigma_);
  whitened_ = forward_solve(*noise_chol_, design_);
}

const SpdMatrix& ModelSpec::correlation() const {
  if (!sigma_) {
    throw DomainError("ModelSpec: identity correlation has no stored matrix");
  }
  return *sigma_;
}

const LowerTriangular& ModelSpec::noise_chol() const {
  if (!noise_chol_) {
    throw DomainError("ModelSpec: identity correlation has no stored factor");
  }
  return *noise_chol_;
}

VectorXd ModelSpec::whiten(const VectorXd& v) const {
  if (v.size() != n()) {
    throw DimensionMismatch("ModelSpec::whiten: vector length " + std::to_string(v.size()) +
                            " does not match n = " + std::to_string(n()));
  }
  return noise_chol_ ? forward_solve(*noise_chol_, v) : v;
}

MatrixXd ModelSpec::whiten(const MatrixXd& m) const {
  if (m.rows() != n()) {
    throw DimensionMismatch("ModelSpec::whiten: matrix has " + std::to_string(m.rows()) +
                            " rows but n = " + std::to_string(n()));
  }
  return noise_chol_ ? forward_solve(*noise_chol_, m) : m;
}

double ModelSpec::log_det_precision() const {
  return noise_chol_ ? -logdet_from_chol(*noise_chol_) : 0.0;
}

PosteriorSummary posterior_update(const NormalGammaParams& prior, const ModelSpec& model,
                                  const VectorXd& y) {
  const int n = model.n();
  const int p = model.p();
  if (prior.dim() != p) {
    throw DimensionMismatch("posterior_update: prior is " + std::to_string(prior.dim()) +
                            "-dimensional but the design has " + std::to_string(p) + " columns");
  }
  if (y.size() != n) {
    throw DimensionMismatch("posterior_update: y has length " + std::to_string(y.size()) +
                            " but the design has " + std::to_string(n) + " rows");
  }

  const LowerTriangular prior_chol = cholesky(prior.precision);

  if (n == 0) {
    return PosteriorSummary{prior,
                            0.0,
                            0.0,
                            prior_chol,
                            spd_inverse_from_chol(prior_chol),
                            0.0,
                            VectorXd::Zero(0)};
  }

  const MatrixXd& H = model.whitened_design();
  const VectorXd yt = model.whiten(y);

  SpdMatrix An(prior.precision.matrix() + H.transpose() * H);
  const LowerTriangular An_chol = cholesky(An);
  const VectorXd rhs = prior.precision.matrix() * prior.theta + H.transpose() * yt;
  const VectorXd theta_n = chol_solve(An_chol, rhs);
  const SpdMatrix An_inv = spd_inverse_from_chol(An_chol);

  // Both quadratic forms as squared norms, so they cannot go negative.
  const double s2 = (yt - H * theta_n).squaredNorm();
  const double d2 =
      (prior_chol.matrix().transpose() * (prior.theta - theta_n)).squaredNorm();

  const bool fixed = prior.lambda_known.has_value();
  const double alpha_n = fixed ? prior.shape : prior.shape + 0.5 * n;
  const double beta_n = fixed ? prior.rate : prior.rate + 0.5 * (s2 + d2);

  NormalGammaParams posterior(theta_n, std::move(An), alpha_n, beta_n, prior.lambda_known);

  const double log_ev = detail::log_evidence_from_update(
      prior, model, logdet_from_chol(prior_chol), logdet_from_chol(An_chol), s2, d2);

  return PosteriorSummary{std::move(posterior), s2, d2, An_chol, An_inv, log_ev, yt};
}

double beta_n_marginal(const NormalGammaParams& prior, const ModelSpec& model, const VectorXd& y) {
  const int n = model.n();
  if (y.size() != n) {
    throw DimensionMismatch("beta_n_marginal: y has length " + std::to_string(y.size()) +
                            " but the design has " + std::to_string(n) + " rows");
  }
  if (prior.dim() != model.p()) {
    throw DimensionMismatch("beta_n_marginal: prior is " + std::to_string(prior.dim()) +
                            "-dimensional but the design has " + std::to_string(model.p()) +
                            " columns");
  }
  if (n == 0) return prior.rate;
  const MatrixXd& X = model.design();
  const SpdMatrix A0_inv = spd_inverse(prior.precision);
  MatrixXd M = X * A0_inv.matrix() * X.transpose();
  if (model.identity_correlation()) {
    M += MatrixXd::Identity(n, n);
  } else {
    M += model.correlation().matrix();
  }
  const LowerTriangular Lm = cholesky(SpdMatrix(std::move(M)));
  const VectorXd resid = y - X * prior.theta;
  return prior.rate + 0.5 * inv_quad_form(Lm, resid);
}

double beta_n_naive(const NormalGammaParams& prior, const ModelSpec& model, const VectorXd& y) {
  const PosteriorSummary post = posterior_update(prior, model, y);
  const double y_quad = model.whiten(y).squaredNorm();
  const double prior_quad = prior.theta.dot(prior.precision.matrix() * prior.theta);
  const double post_quad =
      post.posterior.theta.dot(post.posterior.precision.matrix() * post.posterior.theta);
  return prior.rate + 0.5 * (y_quad + prior_quad - post_quad);
}

std::pair<VectorXd, MatrixXd> mle_decomposition(const ModelSpec& model,
                                                const NormalGammaParams& prior,
                                                const VectorXd& y) {
  if (!model.identity_correlation()) {
    throw DomainError("mle_decomposition: requires identity correlation");
  }
  if (prior.dim() != model.p()) {
    throw DimensionMismatch("mle_decomposition: prior is " + std::to_string(prior.dim()) +
                            "-dimensional but the design has " + std::to_string(model.p()) +
                            " columns");
  }
  const MatrixXd& X = model.design();
  const MatrixXd xtx = X.transpose() * X;
  LowerTriangular xtx_chol = [&] {
    try {
      return cholesky(SpdMatrix(xtx));
    } catch (const NotPositiveDefinite&) {
      throw SingularDesign("mle_decomposition: X'X is singular (rank-deficient design)");
    }
  }();
  const VectorXd theta_hat = chol_solve(xtx_chol, VectorXd(X.transpose() * y));

  const SpdMatrix An(prior.precision.matrix() + xtx);
  const MatrixXd W = chol_solve(cholesky(An), xtx);
  return {theta_hat, W};
}

}  // namespace blm
