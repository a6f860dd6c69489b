#include "blm/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blm/special_functions.hpp"

namespace blm {

namespace detail {

double log_evidence_from_update(const NormalGammaParams& prior, const ModelSpec& model,
                                double logdet_A0, double logdet_An, double s2, double d2) {
  const int n = model.n();
  if (n == 0) return 0.0;
  const double logdet_B0 = model.log_det_precision() + logdet_A0 - logdet_An;
  const double half_n_log2pi = 0.5 * n * std::log(2.0 * std::numbers::pi);
  if (prior.lambda_known) {
    const double lambda = *prior.lambda_known;
    return -half_n_log2pi + 0.5 * n * std::log(lambda) + 0.5 * logdet_B0 -
           0.5 * lambda * (s2 + d2);
  }
  const double alpha_n = prior.shape + 0.5 * n;
  const double beta_n = prior.rate + 0.5 * (s2 + d2);
  return -half_n_log2pi + 0.5 * logdet_B0 + prior.shape * std::log(prior.rate) -
         log_gamma(prior.shape) + log_gamma(alpha_n) - alpha_n * std::log(beta_n);
}

}  // namespace detail

double log_evidence(const NormalGammaParams& prior, const ModelSpec& model, const VectorXd& y) {
  return posterior_update(prior, model, y).log_evidence;
}

double log_evidence_reduced(const NormalGammaParams& prior, const ModelSpec& model,
                            const VectorXd& y) {
  const PosteriorSummary post = posterior_update(prior, model, y);
  const double logdet_B0 = model.log_det_precision() + logdet_from_chol(cholesky(prior.precision)) -
                           logdet_from_chol(post.An_chol);
  const double beta_n = prior.rate + 0.5 * (post.s2_n + post.d2_n);
  if (prior.lambda_known) {
    return 0.5 * logdet_B0 - *prior.lambda_known * beta_n;
  }
  const double alpha_n = prior.shape + 0.5 * model.n();
  return 0.5 * logdet_B0 - alpha_n * std::log(beta_n);
}

namespace {

bool same_correlation(const ModelSpec& a, const ModelSpec& b) {
  if (a.n() != b.n()) return false;
  if (a.identity_correlation() != b.identity_correlation()) return false;
  if (a.identity_correlation()) return true;
  const MatrixXd& ma = a.correlation().matrix();
  const MatrixXd& mb = b.correlation().matrix();
  const double scale = std::max({ma.cwiseAbs().maxCoeff(), mb.cwiseAbs().maxCoeff(), 1e-300});
  return (ma - mb).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1.0}); }

}  // namespace

std::vector<ModelEvidence> evaluate_models(const std::vector<ModelCandidate>& candidates,
                                           const VectorXd& y) {
  if (candidates.empty()) {
    throw EmptyModelList("evaluate_models: need at least one candidate model");
  }
  const ModelCandidate& ref = candidates.front();
  for (const ModelCandidate& c : candidates) {
    if (!same_correlation(c.model, ref.model)) {
      throw IncompatibleComparison("evaluate_models: candidate '" + c.label +
                                   "' does not share the correlation matrix");
    }
    const bool fixed = c.prior.lambda_known.has_value();
    const bool ref_fixed = ref.prior.lambda_known.has_value();
    if (fixed != ref_fixed ||
        (fixed && !close(*c.prior.lambda_known, *ref.prior.lambda_known))) {
      throw IncompatibleComparison("evaluate_models: candidate '" + c.label +
                                   "' does not share the fixed-lambda setting");
    }
    if (!fixed && (!close(c.prior.shape, ref.prior.shape) || !close(c.prior.rate, ref.prior.rate))) {
      throw IncompatibleComparison("evaluate_models: candidate '" + c.label +
                                   "' does not share the lambda prior (alpha_0, beta_0)");
    }
  }
  std::vector<ModelEvidence> out;
  out.reserve(candidates.size());
  for (const ModelCandidate& c : candidates) {
    out.push_back(ModelEvidence{c.label, log_evidence(c.prior, c.model, y),
                                log_evidence_reduced(c.prior, c.model, y)});
  }
  return out;
}

VectorXd model_posterior_probs(const std::vector<double>& log_evidences) {
  if (log_evidences.empty()) {
    throw EmptyModelList("model_posterior_probs: need at least one evidence value");
  }
  const int m = static_cast<int>(log_evidences.size());
  const double top = *std::max_element(log_evidences.begin(), log_evidences.end());
  VectorXd probs(m);
  for (int i = 0; i < m; ++i) {
    probs(i) = std::exp(log_evidences[i] - top);
  }
  probs /= probs.sum();
  return probs;
}

}  // namespace blm
