#include "blm/predictive.hpp"

#include <cmath>
#include <string>

namespace blm {

namespace {

constexpr double kPsdSlack = 1e-9;

struct Assembly {
  VectorXd mean;
  MatrixXd b_inv;
};

Assembly assemble(const PosteriorSummary& post, const PredictionTarget& tgt) {
  const int p = static_cast<int>(post.posterior.theta.size());
  if (tgt.p() != p) {
    throw DimensionMismatch("predict: target has " + std::to_string(tgt.p()) +
                            " regressor columns but the posterior is " + std::to_string(p) +
                            "-dimensional");
  }
  const MatrixXd& C_m = tgt.residual_regressor();
  VectorXd mean = C_m * post.posterior.theta;
  if (tgt.whitened_cross()) {
    const MatrixXd& a_m = *tgt.whitened_cross();
    if (a_m.rows() != post.whitened_response.size()) {
      throw DimensionMismatch("predict: target was built against a model with " +
                              std::to_string(a_m.rows()) + " observations but the posterior saw " +
                              std::to_string(post.whitened_response.size()));
    }
    mean += a_m.transpose() * post.whitened_response;
  }

  // (Xm - v'AX) A_n^{-1} (Xm - v'AX)' via the cached factor of A_n.
  const MatrixXd G = forward_solve(post.An_chol, MatrixXd(C_m.transpose()));
  MatrixXd b_inv = tgt.schur_complement() + G.transpose() * G;
  b_inv = ((b_inv + b_inv.transpose()) / 2.0).eval();
  const double tol =
      kPsdSlack * std::max(1.0, b_inv.diagonal().cwiseAbs().maxCoeff());
  if (!semidefinite_cholesky(b_inv, tol)) {
    throw NotPositiveDefinite("predict: conditional covariance is not positive semidefinite", -1);
  }
  return Assembly{std::move(mean), std::move(b_inv)};
}

}  // namespace

PredictionTarget::PredictionTarget(MatrixXd Xm) : Xm_(std::move(Xm)) {
  if (Xm_.rows() < 1 || Xm_.cols() < 1) {
    throw DimensionMismatch("PredictionTarget: Xm must be a nonempty m x p matrix");
  }
}

PredictionTarget PredictionTarget::independent(MatrixXd Xm) {
  PredictionTarget tgt(std::move(Xm));
  tgt.schur_ = MatrixXd::Identity(tgt.m(), tgt.m());
  return tgt;
}

PredictionTarget PredictionTarget::correlated(const ModelSpec& model, MatrixXd Xm,
                                              const MatrixXd& cross_cov,
                                              const SpdMatrix& target_cov) {
  PredictionTarget tgt(std::move(Xm));
  const int m = tgt.m();
  if (tgt.p() != model.p()) {
    throw DimensionMismatch("PredictionTarget: Xm has " + std::to_string(tgt.p()) +
                            " columns but the model has p = " + std::to_string(model.p()));
  }
  if (cross_cov.rows() != model.n() || cross_cov.cols() != m) {
    throw DimensionMismatch("PredictionTarget: cross covariance must be n x m = " +
                            std::to_string(model.n()) + " x " + std::to_string(m));
  }
  if (target_cov.dim() != m) {
    throw DimensionMismatch("PredictionTarget: target covariance must be m x m");
  }

  const MatrixXd a_m = model.whiten(cross_cov);
  MatrixXd schur = target_cov.matrix() - a_m.transpose() * a_m;
  schur = ((schur + schur.transpose()) / 2.0).eval();
  // Sigma is SPD already, so the joint [[Sigma, v],[v', Am_inv]] is PSD
  // exactly when this Schur complement is. Interpolation targets make it
  // singular, which the tolerant factorization accepts.
  if (!semidefinite_cholesky(schur, kPsdSlack * target_cov.matrix().diagonal().maxCoeff())) {
    throw NotPositiveDefinite(
        "PredictionTarget: joint covariance of data and targets is not positive semidefinite "
        "(cross covariance inconsistent with the model correlation)",
        -1);
  }

  tgt.residual_ = tgt.Xm_ - a_m.transpose() * model.whitened_design();
  tgt.whitened_cross_ = a_m;
  tgt.schur_ = std::move(schur);
  return tgt;
}

MvNormal PredictiveNormal::to_mvnormal() const {
  return MvNormal::from_covariance(mean, SpdMatrix(covariance));
}

MvT PredictiveT::to_mvt() const { return MvT(dof, mean, SpdMatrix(dispersion)); }

PredictiveNormal predict_known_lambda(const PosteriorSummary& post, const PredictionTarget& tgt,
                                      double lambda) {
  if (!(lambda > 0.0)) {
    throw DomainError("predict_known_lambda: lambda must be positive");
  }
  Assembly parts = assemble(post, tgt);
  return PredictiveNormal{std::move(parts.mean), parts.b_inv / lambda};
}

PredictiveT predict_t(const PosteriorSummary& post, const PredictionTarget& tgt) {
  if (post.posterior.lambda_known) {
    throw LambdaFixed("predict_t: lambda is fixed; use predict_known_lambda");
  }
  Assembly parts = assemble(post, tgt);
  const double scale = post.posterior.rate / post.posterior.shape;
  return PredictiveT{2.0 * post.posterior.shape, std::move(parts.mean), scale * parts.b_inv};
}

namespace {

void check_functional_shape(const PosteriorSummary& post, const MatrixXd& T) {
  if (T.cols() != post.posterior.theta.size()) {
    throw DimensionMismatch("marginal_linear: T has " + std::to_string(T.cols()) +
                            " columns but theta is " +
                            std::to_string(post.posterior.theta.size()) + "-dimensional");
  }
}

MatrixXd functional_dispersion(const PosteriorSummary& post, const MatrixXd& T) {
  MatrixXd d = T * post.An_inv.matrix() * T.transpose();
  return ((d + d.transpose()) / 2.0).eval();
}

}  // namespace

PredictiveT marginal_linear(const PosteriorSummary& post, const MatrixXd& T) {
  if (post.posterior.lambda_known) {
    throw LambdaFixed("marginal_linear: lambda is fixed; use marginal_linear_known_lambda");
  }
  check_functional_shape(post, T);
  const double scale = post.posterior.rate / post.posterior.shape;
  return PredictiveT{2.0 * post.posterior.shape, T * post.posterior.theta,
                     scale * functional_dispersion(post, T)};
}

PredictiveNormal marginal_linear_known_lambda(const PosteriorSummary& post, const MatrixXd& T,
                                              double lambda) {
  if (!(lambda > 0.0)) {
    throw DomainError("marginal_linear_known_lambda: lambda must be positive");
  }
  check_functional_shape(post, T);
  return PredictiveNormal{T * post.posterior.theta, functional_dispersion(post, T) / lambda};
}

GammaDist lambda_marginal(const PosteriorSummary& post) {
  if (post.posterior.lambda_known) {
    throw LambdaFixed("lambda_marginal: lambda was declared known");
  }
  return GammaDist(post.posterior.shape, post.posterior.rate);
}

}  // namespace blm
